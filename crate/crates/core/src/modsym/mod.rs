//! Modular symbols for Gamma_0(N): Manin symbols, Hecke operators, rational
//! eigen-functionals and exact evaluation of `<{0,k/m}, f>`.

mod cache;
mod eigen;
mod hecke;
mod p1;
mod space;
mod symbol;

pub use cache::{eigendata, CACHE_FORMAT_VERSION};
pub use eigen::{hecke_eigen, hecke_eigen_auto, EigenData, PMAX_CAP};
pub use hecke::{heilbronn_cremona, hecke_matrix, mat_mul};
pub use p1::{normalize, p1_size, P1List};
pub use space::{genus_x0, lift_to_sl2z, num_cusps, ModSymSpace, MAX_LEVEL};
pub use symbol::{cf_manin_symbols, PeriodPair, SymbolPair};
