pub mod catalog;
pub mod cli;
pub mod exactnum;
pub mod intgeom;
pub mod io;
pub mod stress;
pub mod surface;
