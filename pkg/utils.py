import json
from fractions import Fraction
from typing import Any, Dict, List, Optional


def ratio_payload(value: Optional[Fraction]) -> Optional[Dict[str, str]]:
    """Serialize an exact rational as a numerator/denominator pair of decimal strings."""
    if value is None:
        return None
    return {"numerator": str(value.numerator), "denominator": str(value.denominator)}


def format_json(payload: Dict[str, Any]) -> str:
    """Format a report as JSON"""
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _tsv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, dict) and set(value) == {"numerator", "denominator"}:
        return f"{value['numerator']}/{value['denominator']}"
    if isinstance(value, (dict, list)):
        return json.dumps(value, separators=(",", ":"))
    return str(value)


def format_tsv(payload: Dict[str, Any], rows_key: str = "rows") -> str:
    """Format a report as TSV.

    Tabular payloads (a list of records under `rows_key`) become a header line
    plus one line per record; everything else becomes `key<TAB>value` lines.
    """
    lines: List[str] = []
    rows = payload.get(rows_key)
    for key, value in payload.items():
        if key == rows_key and isinstance(rows, list):
            continue
        lines.append(f"{key}\t{_tsv_cell(value)}")
    if isinstance(rows, list) and rows:
        header = list(rows[0].keys())
        lines.append("\t".join(header))
        for row in rows:
            lines.append("\t".join(_tsv_cell(row.get(column)) for column in header))
    return "\n".join(lines) + "\n"
