"""Report model and writers."""

from .report import (
    SCHEMA,
    TOOL_VERSION,
    CertificateEntry,
    CertificateStatus,
    Report,
    emit,
    table_names,
    write_table,
)

__all__ = [
    "SCHEMA",
    "TOOL_VERSION",
    "CertificateEntry",
    "CertificateStatus",
    "Report",
    "emit",
    "table_names",
    "write_table",
]
