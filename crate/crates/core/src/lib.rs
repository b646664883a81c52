pub mod context;
pub mod exact;
pub mod gram;
pub mod hsgraph;
pub mod nortsak;
pub mod permcore;
pub mod shapes;
pub mod suite;
