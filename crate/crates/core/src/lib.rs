pub mod algebra;
pub mod enumerate;
pub mod eval;
pub mod graph;
pub mod io;
pub mod model;
