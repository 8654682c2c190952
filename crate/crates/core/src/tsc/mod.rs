//! Single-trial ERP-window classification with random convolution kernels
//! (proportion of positive values and maximum per kernel) and a
//! class-balanced ridge classifier whose penalty is picked by efficient
//! leave-one-out cross-validation.

mod kernels;
mod model;
mod ridge;
mod task;

pub use kernels::{Kernel, KernelBank, KERNEL_LENGTHS};
pub use model::{
    evaluate, fit, fit_with_features, predict, predict_with_features, prepare, series_scale, ClassLabel, Confusion, Evaluation, FitOptions,
    Prediction, RocketModel, TrainingMeta, DEFAULT_ALPHA_GRID, DEFAULT_N_KERNELS,
};
pub use ridge::RidgePath;
pub use task::{make_task, make_task_with_window, SeriesInstance, SplitSpec, Task, TaskData, TaskMeta};
