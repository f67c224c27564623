from stapde.fdtd.container import read_trajectory, write_trajectory
from stapde.fdtd.fields import FieldFrame, Trajectory, component_names
from stapde.fdtd.generator import generate_dataset, layout_ids, trajectory_seeds
from stapde.fdtd.grid import GridSpec, ObstacleSpec, SourceSpec, TrajectoryConfig, random_sources
from stapde.fdtd.presets import ObstacleLayout, obstacle_presets
from stapde.fdtd.trajectory import run_trajectory
from stapde.fdtd.yee import SimState, colocate, discrete_div_b, field_energy, inject_sources, step
