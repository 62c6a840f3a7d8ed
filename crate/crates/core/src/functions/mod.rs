//! Matrix exponential, real square root and real logarithms.

mod expm;
mod logm;
mod sqrtm;

pub use expm::{expm, THETA_13};
pub use logm::{logm_principal, real_log_paired, LogKind, LogResult};
pub use sqrtm::sqrtm_real;
