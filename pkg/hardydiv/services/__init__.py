"""Services: report persistence."""

from hardydiv.services.persistence import (
    FileReportStore,
    ReportStore,
    create_report_store,
    dumps_report,
    to_jsonable,
)

__all__ = [
    "FileReportStore",
    "ReportStore",
    "create_report_store",
    "dumps_report",
    "to_jsonable",
]
