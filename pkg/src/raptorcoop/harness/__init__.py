from .catalog import load_raw, preset_names, preset_raw
from .cli import main
from .sweep import SweepSpec, Variant, simulate_sweep, sweep_from_raw

__all__ = ["SweepSpec", "Variant", "load_raw", "main", "preset_names", "preset_raw",
           "simulate_sweep", "sweep_from_raw"]
