pub mod cohom;
pub mod exactlin;
pub mod modspace;
pub mod monad;
pub mod polygrade;
pub mod splitcalc;
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
