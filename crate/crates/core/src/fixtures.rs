//! The three published figure configurations.

use crate::model::{Parameters, State};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureConfig {
    pub name: &'static str,
    pub parameters: Parameters,
    pub start: State,
}

/// Larvae fall while adults rise before both grow.
pub const FIGURE_1: FigureConfig = FigureConfig {
    name: "fig1",
    parameters: Parameters { alpha: 0.6, beta: 0.5, mu: 0.48, d0: 0.0, d1: 0.0 },
    start: State { x: 2.0, y: 0.1 },
};

/// Larvae rise while adults fall before both grow.
pub const FIGURE_2: FigureConfig = FigureConfig {
    name: "fig2",
    parameters: Parameters { alpha: 0.4, beta: 0.35, mu: 0.3, d0: 0.0, d1: 0.0 },
    start: State { x: 0.5, y: 2.0 },
};

/// Alternating transient before both grow.
pub const FIGURE_3: FigureConfig = FigureConfig {
    name: "fig3",
    parameters: Parameters { alpha: 0.9, beta: 0.9, mu: 0.88, d0: 0.0, d1: 0.0 },
    start: State { x: 0.01, y: 0.2 },
};

pub const FIGURES: [FigureConfig; 3] = [FIGURE_1, FIGURE_2, FIGURE_3];
