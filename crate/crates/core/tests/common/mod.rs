//! Random key diagrams that are exact by construction, with a brute-force
//! ground truth that never calls the library's group algorithms.
//!
//! Every group is first built as a direct sum of cyclic groups. Ground
//! truth is computed there with plain modular arithmetic. The library then
//! sees the same diagram after a random unimodular change of basis on every
//! node.

#![allow(dead_code)]

pub mod laws;
pub mod minors;
pub mod oracles;
pub mod snf_suite;
pub mod table;

use motsplit::witt::{DiagramSpec, FgAbGroup, IntMatrix};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `⊕ ℤ/mᵢ` with all `mᵢ ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclic {
    pub moduli: Vec<i64>,
}

impl Cyclic {
    pub fn new(moduli: Vec<i64>) -> Self {
        Cyclic { moduli }
    }

    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> i64 {
        self.moduli.iter().product()
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        v.iter().zip(&self.moduli).map(|(x, m)| x.rem_euclid(*m)).collect()
    }

    pub fn is_zero(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// All elements in reduced coordinates.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &m in &self.moduli {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..m).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// Elements killed by 2.
    pub fn two_torsion(&self) -> Vec<Vec<i64>> {
        self.elements()
            .into_iter()
            .filter(|v| v.iter().zip(&self.moduli).all(|(x, m)| (2 * x) % m == 0))
            .collect()
    }

    pub fn sum(&self, other: &Cyclic) -> Cyclic {
        Cyclic::new(self.moduli.iter().chain(&other.moduli).copied().collect())
    }
}

/// Integer matrix acting on columns, `rows × cols`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub m: Vec<Vec<i64>>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            m: vec![vec![0; cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = Mat::zeros(n, n);
        for i in 0..n {
            a.m[i][i] = 1;
        }
        a
    }

    pub fn from_columns(rows: usize, cols: &[Vec<i64>]) -> Self {
        let mut a = Mat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (row, &x) in a.m.iter_mut().zip(c) {
                row[j] = x;
            }
        }
        a
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.cols);
        self.m
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                for j in 0..other.cols {
                    out.m[i][j] += self.m[i][k] * other.m[k][j];
                }
            }
        }
        out
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.m, self.cols).unwrap()
    }
}

/// Random unimodular `P` with its inverse, built from elementary moves.
pub fn unimodular(rng: &mut ChaCha8Rng, n: usize) -> (Mat, Mat) {
    let mut p = Mat::identity(n);
    let mut q = Mat::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            p.m[0][0] = -1;
            q.m[0][0] = -1;
        }
        return (p, q);
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        if rng.gen_bool(0.2) {
            p.m.swap(i, j);
            for row in q.m.iter_mut() {
                row.swap(i, j);
            }
        } else {
            let k = rng.gen_range(-2..=2);
            // P ← E·P with E = I + k·e_i e_jᵀ; Q ← Q·E⁻¹.
            for c in 0..n {
                let v = p.m[j][c];
                p.m[i][c] += k * v;
            }
            for r in 0..n {
                let v = q.m[r][i];
                q.m[r][j] -= k * v;
            }
        }
    }
    debug_assert_eq!(p.mul(&q), Mat::identity(n));
    (p, q)
}

/// A node in both coordinate systems.
#[derive(Clone, Debug)]
pub struct Node {
    pub group: Cyclic,
    /// New coordinates are `p · old`.
    pub p: Mat,
    pub p_inv: Mat,
}

impl Node {
    fn new(rng: &mut ChaCha8Rng, group: Cyclic) -> Self {
        let (p, p_inv) = unimodular(rng, group.dim());
        Node { group, p, p_inv }
    }

    /// Presentation after the basis change: relations `P · diag(m)`.
    pub fn presented(&self) -> FgAbGroup {
        let n = self.group.dim();
        let mut d = Mat::zeros(n, n);
        for (i, &m) in self.group.moduli.iter().enumerate() {
            d.m[i][i] = m;
        }
        FgAbGroup::new(self.p.mul(&d).to_int_matrix())
    }

    pub fn to_new(&self, v: &[i64]) -> Vec<BigInt> {
        self.p.apply(v).into_iter().map(BigInt::from).collect()
    }

    /// Back to reduced cyclic coordinates.
    pub fn to_old(&self, v: &[BigInt]) -> Vec<i64> {
        let v: Vec<i64> = v.iter().map(|x| i64::try_from(x).unwrap()).collect();
        self.group.reduce(&self.p_inv.apply(&v))
    }
}

/// The key diagram plus the surface extension
/// `U --sq2_upper--> B --eta--> H --rho--> Ch1`.
#[derive(Clone, Debug)]
pub struct KeyInstance {
    pub big_ch: Node,
    pub ch: Node,
    pub h: Node,
    pub ch1: Node,
    pub b: Node,
    pub u: Node,
    pub mod2: Mat,
    pub beta: Mat,
    pub rho: Mat,
    pub sq2: Mat,
    pub partial: Mat,
    pub eta: Mat,
    pub sq2_upper: Mat,
    /// `Hⁿ(X, Iⁿ)` stand-in with `ρₙ: G → Ch`, image exactly `ker β`.
    pub g: Cyclic,
    pub rho_n: Mat,
    pub rho_injective: bool,
}

fn pick<T: Clone>(rng: &mut ChaCha8Rng, xs: &[T]) -> T {
    xs.choose(rng).unwrap().clone()
}

fn random_cyclic(rng: &mut ChaCha8Rng, max_dim: usize, choices: &[i64], max_order: i64) -> Cyclic {
    loop {
        let n = rng.gen_range(0..=max_dim);
        let c = Cyclic::new((0..n).map(|_| pick(rng, choices)).collect());
        if c.order() <= max_order {
            return c;
        }
    }
}

/// Random map whose columns are drawn from `allowed` (target coordinates).
fn random_map(rng: &mut ChaCha8Rng, src_dim: usize, tgt_dim: usize, allowed: &[Vec<i64>]) -> Mat {
    let cols: Vec<Vec<i64>> = (0..src_dim).map(|_| pick(rng, allowed)).collect();
    Mat::from_columns(tgt_dim, &cols)
}

/// Conjugates an old-coordinate map into the new coordinates.
fn conj(src: &Node, tgt: &Node, m: &Mat) -> IntMatrix {
    tgt.p.mul(m).mul(&src.p_inv).to_int_matrix()
}

/// `H = Q ⊕ W`, `B = Q ⊕ K`, `η` the projection onto `Q`, `ρ` zero on `Q`
/// and the inclusion of `W = (ℤ/2)^w` into `Ch1 = W ⊕ (ℤ/2)^e`, `U = K ⊕
/// extra` with `sq2_upper` onto `K`. `β` is random into `H[2]`,
/// `sq2 = ρβ` and `∂ = β∘mod2`.
pub fn random_instance(rng: &mut ChaCha8Rng) -> KeyInstance {
    let ch = Cyclic::new(vec![2; rng.gen_range(1..=3)]);
    let big_ch = loop {
        let c = random_cyclic(rng, 3, &[2, 4, 8, 3, 6], 64);
        if c.dim() > 0 {
            break c;
        }
    };
    let q = if rng.gen_bool(0.5) {
        Cyclic::new(vec![])
    } else {
        random_cyclic(rng, 2, &[2, 4], 16)
    };
    let w = Cyclic::new(vec![2; rng.gen_range(0..=2)]);
    let h = q.sum(&w);
    let ch1 = w.sum(&Cyclic::new(vec![2; rng.gen_range(0..=1)]));
    let k = random_cyclic(rng, 2, &[2, 4, 3], 16);
    let b = q.sum(&k);
    let u = k.sum(&Cyclic::new(vec![2; rng.gen_range(0..=1)]));

    // mod2: any map into an elementary 2-group is well defined on ℤ/2^j,
    // and must vanish on odd cyclic factors.
    let mut mod2 = random_map(rng, big_ch.dim(), ch.dim(), &ch.elements());
    for (j, &m) in big_ch.moduli.iter().enumerate() {
        if m % 2 == 1 {
            for i in 0..ch.dim() {
                mod2.m[i][j] = 0;
            }
        }
    }
    let beta = random_map(rng, ch.dim(), h.dim(), &h.two_torsion());
    let mut rho = Mat::zeros(ch1.dim(), h.dim());
    for i in 0..w.dim() {
        rho.m[i][q.dim() + i] = 1;
    }
    let sq2 = rho.mul(&beta);
    let partial = beta.mul(&mod2);
    let mut eta = Mat::zeros(h.dim(), b.dim());
    for i in 0..q.dim() {
        eta.m[i][i] = 1;
    }
    let mut sq2_upper = Mat::zeros(b.dim(), u.dim());
    for i in 0..k.dim() {
        sq2_upper.m[q.dim() + i][i] = 1;
    }

    let kernel_beta: Vec<Vec<i64>> = ch
        .elements()
        .into_iter()
        .filter(|x| h.is_zero(&beta.apply(x)))
        .collect();
    let g = Cyclic::new(vec![2; kernel_beta.len()]);
    let rho_n = Mat::from_columns(ch.dim(), &kernel_beta);

    KeyInstance {
        big_ch: Node::new(rng, big_ch),
        ch: Node::new(rng, ch),
        h: Node::new(rng, h),
        ch1: Node::new(rng, ch1),
        b: Node::new(rng, b),
        u: Node::new(rng, u),
        mod2,
        beta,
        rho,
        sq2,
        partial,
        eta,
        sq2_upper,
        g,
        rho_n,
        rho_injective: q.dim() == 0,
    }
}

impl KeyInstance {
    /// The diagram in the scrambled coordinates, with its exactness and
    /// commutativity assertions.
    pub fn spec(&self) -> DiagramSpec {
        let mut d = DiagramSpec::new();
        for (name, n) in [
            ("CH", &self.big_ch),
            ("Ch", &self.ch),
            ("H", &self.h),
            ("Ch1", &self.ch1),
            ("B", &self.b),
            ("U", &self.u),
        ] {
            d.add_node(name, n.presented());
        }
        let arrows: [(&str, &Node, &Node, &Mat, &str, &str); 7] = [
            ("mod2", &self.big_ch, &self.ch, &self.mod2, "CH", "Ch"),
            ("beta", &self.ch, &self.h, &self.beta, "Ch", "H"),
            ("rho", &self.h, &self.ch1, &self.rho, "H", "Ch1"),
            ("sq2", &self.ch, &self.ch1, &self.sq2, "Ch", "Ch1"),
            ("partial", &self.big_ch, &self.h, &self.partial, "CH", "H"),
            ("eta", &self.b, &self.h, &self.eta, "B", "H"),
            ("sq2_upper", &self.u, &self.b, &self.sq2_upper, "U", "B"),
        ];
        for (name, s, t, m, sn, tn) in arrows {
            d.add_arrow(name, sn, tn, conj(s, t, m))
                .unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        d.assert_commute(&["mod2", "beta"], &["partial"])
            .assert_commute(&["beta", "rho"], &["sq2"])
            .assert_exact("eta", "rho")
            .assert_exact("sq2_upper", "eta");
        d
    }

    /// Ground truth: `c` lifts iff some `(c, g)` lies in the fiber product
    /// `CH ×_Ch G`, i.e. `mod2(c) = ρₙ(g)`.
    pub fn lifts(&self, c: &[i64]) -> bool {
        let target = self.ch.group.reduce(&self.mod2.apply(c));
        self.g
            .elements()
            .iter()
            .any(|g| self.ch.group.reduce(&self.rho_n.apply(g)) == target)
    }

    /// `Sq²(c̄)` in cyclic coordinates of `Ch1`.
    pub fn square(&self, c: &[i64]) -> Vec<i64> {
        self.ch1.group.reduce(&self.sq2.apply(&self.mod2.apply(c)))
    }
}

/// Counts from checking one instance against its ground truth.
#[derive(Clone, Copy, Debug, Default)]
pub struct LiftTally {
    pub cycles: usize,
    pub lifting: usize,
    pub square_checked: usize,
    pub psi_checked: usize,
}

/// Every element of `CH` is queried through each applicable route and
/// compared with the fiber-product ground truth.
pub fn check_instance(inst: &KeyInstance) -> Result<LiftTally, String> {
    use motsplit::witt::{check_diagram, lift_query, lift_via, psi_obstruction, LiftQuery, LiftRoute, LiftVerdict, WittError};

    let spec = inst.spec();
    let report = check_diagram(&spec).map_err(|e| e.to_string())?;
    if !report.pass {
        return Err(format!("generated diagram fails its own assertions: {report:?}"));
    }
    let mut t = LiftTally::default();
    for c in inst.big_ch.group.elements() {
        let truth = inst.lifts(&c);
        let cycle = inst.big_ch.to_new(&c);
        let q = LiftQuery::new(cycle.clone());
        t.cycles += 1;
        t.lifting += truth as usize;

        let r = lift_query(&spec, &q).map_err(|e| e.to_string())?;
        if (r.verdict == LiftVerdict::Lifts) != truth {
            return Err(format!("default route on {c:?}: got {:?}, truth {truth}", r.verdict));
        }
        let r = lift_via(&spec, &q, LiftRoute::Square).map_err(|e| e.to_string())?;
        if r.rho_injective != Some(inst.rho_injective) {
            return Err(format!("rho injectivity misreported: {:?}", r.rho_injective));
        }
        match (&r.verdict, inst.rho_injective) {
            (LiftVerdict::NeedsInjectivity, false) => {}
            (LiftVerdict::Lifts, true) if truth => t.square_checked += 1,
            (LiftVerdict::Obstructed { witness }, true) if !truth => {
                if inst.ch1.to_old(witness) != inst.square(&c) {
                    return Err(format!("square witness {witness:?} is not Sq2 of {c:?}"));
                }
                t.square_checked += 1;
            }
            (v, _) => return Err(format!("square route on {c:?}: got {v:?}, truth {truth}")),
        }

        let squares_to_zero = inst.ch1.group.is_zero(&inst.square(&c));
        match psi_obstruction(&spec, &cycle) {
            Ok(p) if squares_to_zero => {
                if (p.verdict == LiftVerdict::Lifts) != truth {
                    return Err(format!("psi on {c:?}: got {:?}, truth {truth}", p.verdict));
                }
                t.psi_checked += 1;
            }
            Err(WittError::CycleNotInKernel) if !squares_to_zero => {}
            other => return Err(format!("psi on {c:?} (Sq2 zero: {squares_to_zero}): {other:?}")),
        }
    }
    Ok(t)
}
