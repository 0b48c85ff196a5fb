"""
求解结果与闭式场的后处理
Post-processing: ray profiles, far-field fits, phase maps and plots
"""
from .profiles import RayProfile, circular_stats, log_radii, ray_profile, wrap_angle
from .fits import HarmonicFit, WakeFit, harmonic_fit, mean_wake_angle, wake_fit
from .phase_map import PHASEMAP_COLUMNS, PhaseMapRow, phase_frame, phase_map, phase_row, write_phasemap
from .plots import HEATMAP_COLUMNS, plot_heatmap, plot_phase_panels, plot_profile, save_svg

__all__ = [
    'RayProfile', 'circular_stats', 'log_radii', 'ray_profile', 'wrap_angle',
    'HarmonicFit', 'WakeFit', 'harmonic_fit', 'mean_wake_angle', 'wake_fit',
    'PHASEMAP_COLUMNS', 'PhaseMapRow', 'phase_frame', 'phase_map', 'phase_row', 'write_phasemap',
    'HEATMAP_COLUMNS', 'plot_heatmap', 'plot_phase_panels', 'plot_profile', 'save_svg',
]
