pub mod diffalg;
pub mod dynsys;
pub mod engine;
pub mod frontend;
pub mod groebner;
pub mod polyring;
pub mod seriescheck;
