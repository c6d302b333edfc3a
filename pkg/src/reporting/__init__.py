from src.reporting.charts import experiment_chart, trace_gantt, write_html
from src.reporting.report_builder import ReportBuilder

__all__ = ["ReportBuilder", "experiment_chart", "trace_gantt", "write_html"]
