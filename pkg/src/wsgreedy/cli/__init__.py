from .config import ScenarioConfig
from .experiments import RunReport, run_experiment_A, run_experiment_B, run_experiment_C
from .report import emit_report, read_csv

__all__ = ["RunReport", "ScenarioConfig", "emit_report", "read_csv", "run_experiment_A", "run_experiment_B",
           "run_experiment_C"]
