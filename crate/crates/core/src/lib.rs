pub mod coeff;
pub mod fgoracle;
pub mod heegaard;
pub mod linsolve;
pub mod ncalg;
pub mod presentations;
