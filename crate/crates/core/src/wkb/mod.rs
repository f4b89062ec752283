mod action;
mod ground;
mod langer;
mod magnus;
mod solutions;

pub use action::{action, bohr_sommerfeld, nearest_index, turning_point, well_bottom, ActionData};
pub use ground::{
    channel_one_matrix, default_window, ground_state, ground_state_on, GroundStateData,
    GROUND_MULTIPLIER,
};
pub use langer::{LangerMap, LangerPoint};
pub use magnus::{magnus_step, propagate, State};
pub use solutions::{
    airy_target, fundamental_solution, inner_turning_point, outer_turning_point, side_grid,
    wronskian, Kind, Side, SideGrid, WkbConfig, WkbSolution,
};
