from src.events.trace_bus import ALL_KINDS, TraceBus, TraceCollector, TraceRecord

__all__ = ["ALL_KINDS", "TraceBus", "TraceCollector", "TraceRecord"]
