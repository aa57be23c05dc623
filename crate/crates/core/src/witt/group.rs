//! Finitely generated abelian groups `ℤⁿ / im(R)` and maps between them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::matrix::IntMatrix;
use super::snf::{snf, Snf};
use super::WittError;

/// Integer solution of `A·x = b`, if any.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    solve_with(&snf(a), b)
}

fn solve_with(s: &Snf, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let c = s.u.mul_vec(b);
    let n = s.v.rows();
    let mut z = vec![BigInt::zero(); n];
    for (i, ci) in c.iter().enumerate() {
        if i < s.rank {
            let (q, r) = ci.div_rem(&s.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&z))
}

/// Basis of `{x ∈ ℤⁿ : A·x = 0}` as matrix columns.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let s = snf(a);
    s.v.col_block(s.rank, a.cols())
}

/// `ℤⁿ` modulo the column span of `relations` (an `n × k` matrix).
#[derive(Clone, Debug)]
pub struct FgAbGroup {
    relations: IntMatrix,
    snf: Snf,
    /// Per SNF coordinate: `dᵢ`, with 0 for free coordinates.
    moduli: Vec<BigInt>,
}

impl PartialEq for FgAbGroup {
    fn eq(&self, other: &Self) -> bool {
        self.relations == other.relations
    }
}

impl Eq for FgAbGroup {}

impl FgAbGroup {
    pub fn new(relations: IntMatrix) -> Self {
        let s = snf(&relations);
        let n = relations.rows();
        let moduli = (0..n)
            .map(|i| {
                if i < s.rank {
                    s.d[(i, i)].clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        FgAbGroup {
            relations,
            snf: s,
            moduli,
        }
    }

    /// From relation vectors, each of length `generators`.
    pub fn from_relations(generators: usize, relations: &[Vec<i64>]) -> Option<Self> {
        let cols: Vec<Vec<BigInt>> = relations
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        if cols.iter().any(|c: &Vec<BigInt>| c.len() != generators) {
            return None;
        }
        Some(Self::new(IntMatrix::from_columns(&cols, generators)))
    }

    pub fn free(n: usize) -> Self {
        Self::new(IntMatrix::zeros(n, 0))
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// `ℤ/m₁ ⊕ ⋯ ⊕ ℤ/m_k`; `mᵢ = 0` gives a free summand.
    pub fn cyclic_sum(moduli: &[u64]) -> Self {
        let n = moduli.len();
        let mut cols = Vec::new();
        for (i, &m) in moduli.iter().enumerate() {
            if m != 0 {
                let mut c = vec![BigInt::zero(); n];
                c[i] = BigInt::from(m);
                cols.push(c);
            }
        }
        Self::new(IntMatrix::from_columns(&cols, n))
    }

    pub fn generators(&self) -> usize {
        self.relations.rows()
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn free_rank(&self) -> usize {
        self.moduli.iter().filter(|d| d.is_zero()).count()
    }

    /// Torsion invariant factors greater than one, in divisibility order.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.moduli
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }

    /// `None` for infinite groups.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank() > 0 {
            None
        } else {
            Some(self.torsion().iter().product())
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order().is_some_and(|o| o.is_one())
    }

    /// Canonical coordinates: `y = U·x` with `yᵢ` reduced into `[0, dᵢ)`.
    /// Two vectors name the same element iff their canonical forms agree.
    pub fn canonical(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.generators(), "element length");
        self.snf
            .u
            .mul_vec(x)
            .into_iter()
            .zip(&self.moduli)
            .map(|(y, d)| if d.is_zero() { y } else { y.mod_floor(d) })
            .collect()
    }

    pub fn is_zero(&self, x: &[BigInt]) -> bool {
        self.canonical(x).iter().all(Zero::is_zero)
    }

    pub fn eq_elements(&self, x: &[BigInt], y: &[BigInt]) -> bool {
        let d: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_zero(&d)
    }

    /// Representative with canonical coordinates, mapped back to generators.
    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.snf.u_inv.mul_vec(&self.canonical(x))
    }

    /// Every element of a finite group, one representative each. `None`
    /// for infinite groups or more than `limit` elements.
    pub fn elements(&self, limit: usize) -> Option<Vec<Vec<BigInt>>> {
        let order = self.order()?.to_usize()?;
        if order > limit {
            return None;
        }
        let mut out = Vec::with_capacity(order);
        let mut y = vec![BigInt::zero(); self.generators()];
        loop {
            out.push(self.snf.u_inv.mul_vec(&y));
            // odometer over coordinates with dᵢ > 1
            let mut i = 0;
            loop {
                if i == y.len() {
                    return Some(out);
                }
                let d = &self.moduli[i];
                if d.is_zero() || d.is_one() {
                    i += 1;
                    continue;
                }
                y[i] += 1;
                if &y[i] < d {
                    break;
                }
                y[i] = BigInt::zero();
                i += 1;
            }
        }
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.torsion().iter().map(|d| format!("Z/{d}")).collect();
        for _ in 0..self.free_rank() {
            parts.push("Z".to_string());
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Group homomorphism given by an integer matrix on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homo {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl Homo {
    /// Checks that every source relation maps into the target relations.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self, WittError> {
        if matrix.rows() != target.generators() || matrix.cols() != source.generators() {
            return Err(WittError::ShapeMismatch {
                expected: (target.generators(), source.generators()),
                found: (matrix.rows(), matrix.cols()),
            });
        }
        let images = &matrix * source.relations();
        for j in 0..images.cols() {
            if !target.is_zero(&images.column(j)) {
                return Err(WittError::IllDefinedHomo(j));
            }
        }
        Ok(Homo {
            source,
            target,
            matrix,
        })
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        Homo {
            matrix: IntMatrix::zeros(target.generators(), source.generators()),
            source: source.clone(),
            target: target.clone(),
        }
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        Homo {
            matrix: IntMatrix::identity(g.generators()),
            source: g.clone(),
            target: g.clone(),
        }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(x)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homo) -> Result<Homo, WittError> {
        if self.target != other.source {
            return Err(WittError::NotComposable);
        }
        Ok(Homo {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: &other.matrix * &self.matrix,
        })
    }

    pub fn add(&self, other: &Homo) -> Result<Homo, WittError> {
        if self.source != other.source || self.target != other.target {
            return Err(WittError::NotComposable);
        }
        Ok(Homo {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.add(&other.matrix),
        })
    }

    /// Equal as maps: same endpoints and equal on every generator.
    pub fn agrees_with(&self, other: &Homo) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        let diff = self.matrix.sub(&other.matrix);
        (0..diff.cols()).all(|j| self.target.is_zero(&diff.column(j)))
    }

    pub fn is_zero_map(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.is_zero(&self.matrix.column(j)))
    }

    /// `[M | R_target]`, whose integer kernel describes preimages of zero.
    fn kernel_system(&self) -> IntMatrix {
        self.matrix.hstack(self.target.relations())
    }

    /// Generators (as source vectors) of the kernel.
    pub fn kernel_generators(&self) -> IntMatrix {
        let k = integer_kernel(&self.kernel_system());
        k.row_block(0, self.source.generators())
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup::new(self.source.clone(), self.kernel_generators())
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::new(self.target.clone(), self.matrix.clone())
    }

    pub fn cokernel(&self) -> FgAbGroup {
        FgAbGroup::new(self.target.relations().hstack(&self.matrix))
    }

    pub fn is_injective(&self) -> bool {
        let k = self.kernel_generators();
        (0..k.cols()).all(|j| self.source.is_zero(&k.column(j)))
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    /// Some `x` with `self(x) = y` in the target, if one exists.
    pub fn preimage(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let sys = self.kernel_system();
        let sol = solve(&sys, y)?;
        Some(sol[..self.source.generators()].to_vec())
    }
}

/// Subgroup of `ambient` generated by the columns of `gens`.
#[derive(Clone, Debug)]
pub struct Subgroup {
    ambient: FgAbGroup,
    gens: IntMatrix,
}

impl Subgroup {
    pub fn new(ambient: FgAbGroup, gens: IntMatrix) -> Self {
        assert_eq!(gens.rows(), ambient.generators(), "subgroup generator length");
        Subgroup { ambient, gens }
    }

    pub fn ambient(&self) -> &FgAbGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.gens
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        solve(&self.gens.hstack(self.ambient.relations()), x).is_some()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        let s = snf(&other.gens.hstack(other.ambient.relations()));
        (0..self.gens.cols()).all(|j| solve_with(&s, &self.gens.column(j)).is_some())
    }

    pub fn same_as(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// The subgroup as an abstract group on its generators.
    pub fn as_group(&self) -> FgAbGroup {
        let k = integer_kernel(&self.gens.hstack(self.ambient.relations()));
        FgAbGroup::new(k.row_block(0, self.gens.cols()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupQuery {
    Kernel,
    Image,
    Cokernel,
    IsInjective,
    IsSurjective,
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum GroupAnswer {
    Group(FgAbGroup),
    Bool(bool),
}

pub fn group_calc(h: &Homo, what: GroupQuery) -> GroupAnswer {
    match what {
        GroupQuery::Kernel => GroupAnswer::Group(h.kernel().as_group()),
        GroupQuery::Image => GroupAnswer::Group(h.image().as_group()),
        GroupQuery::Cokernel => GroupAnswer::Group(h.cokernel()),
        GroupQuery::IsInjective => GroupAnswer::Bool(h.is_injective()),
        GroupQuery::IsSurjective => GroupAnswer::Bool(h.is_surjective()),
    }
}

/// `im f = ker g` inside the middle group.
pub fn is_exact_at(f: &Homo, g: &Homo) -> Result<bool, WittError> {
    if f.target != g.source {
        return Err(WittError::NotComposable);
    }
    Ok(f.image().same_as(&g.kernel()))
}

pub fn to_i64_vec(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect()
}

pub fn from_i64_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
