from .reports import CapacityReport, TagRow, EmbedReport, QualityReport, AnalysisRow, AnalysisSummary
from .commands import CommandConfig

__all__ = ["CapacityReport", "TagRow", "EmbedReport", "QualityReport", "AnalysisRow", "AnalysisSummary",
           "CommandConfig"]
