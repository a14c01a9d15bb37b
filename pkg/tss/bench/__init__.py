from .benchmark import BenchResult, run_benchmark

__all__ = ["BenchResult", "run_benchmark"]
