pub mod bounds;
pub mod channel;
pub mod entmeas;
pub mod error;
pub mod icpovm;
pub mod linalg;
mod optim;
pub mod qalg;
pub mod recovery;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub type DensityMatrixF64 = qalg::DensityMatrix<f64>;
pub type DensityMatrixF32 = qalg::DensityMatrix<f32>;
pub type PureStateF64 = qalg::PureState<f64>;
pub type PureStateF32 = qalg::PureState<f32>;
pub type KrausChannelF64 = channel::KrausChannel<f64>;
pub type KrausChannelF32 = channel::KrausChannel<f32>;
pub type PovmF64 = icpovm::Povm<f64>;
pub type PovmF32 = icpovm::Povm<f32>;
pub type DualFrameF64 = icpovm::DualFrame<f64>;
pub type DualFrameF32 = icpovm::DualFrame<f32>;
