pub mod chern;
pub mod cli;
pub mod gring;
pub mod motives;
pub mod steenrod;
pub mod thom;
pub mod witt;
