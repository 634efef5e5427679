from fractions import Fraction
from typing import Any, Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from constants import REPORT_SCHEMA, TOOL_VERSION
from utils import format_json, format_tsv, ratio_payload


class Report(BaseModel):
    """Envelope of every machine-readable report."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=REPORT_SCHEMA, alias="schema")
    tool_version: str = TOOL_VERSION
    input_digest: Optional[str] = Field(
        default=None, description="sha256 of the canonical serialization of the input table"
    )
    command: str
    payload: Dict[str, Any]


def to_plain(value: Any) -> Any:
    """Convert report values to JSON-ready data: rationals as numerator/denominator strings."""
    if isinstance(value, BaseModel):
        return {key: to_plain(getattr(value, key)) for key in type(value).model_fields}
    if isinstance(value, Fraction):
        return ratio_payload(value)
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return [to_plain(item) for item in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def render(report: Report, tsv: bool = False) -> str:
    if tsv:
        header = {
            "schema": report.schema_version,
            "tool_version": report.tool_version,
            "input_digest": report.input_digest,
            "command": report.command,
        }
        return format_tsv({**header, **report.payload})
    return format_json(report.model_dump(by_alias=True))
