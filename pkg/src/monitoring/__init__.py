from src.monitoring.run_profiler import RunMetrics, RunProfiler

__all__ = ["RunMetrics", "RunProfiler"]
