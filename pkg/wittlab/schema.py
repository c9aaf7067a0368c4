"""JSON requests and reports."""
import dataclasses
import json
import re
from pathlib import Path
from typing import Any, Dict, List, Optional

from . import __version__
from .cohomology import BrauerClass2, H3Class, corestriction
from .config import SearchBudget
from .errors import SchemaError
from .fields import Field, QuadExtension, field_from_descriptor
from .qforms import QuadraticForm

FORMATS = ("json", "jsonl", "pretty")
_SQRT_FIELD = re.compile(r"^Q\(sqrt\(?(-?\d+)\)?\)$")


@dataclasses.dataclass(frozen=True)
class Request:
    command: str
    field: Field
    payload: Dict[str, Any]
    budget: SearchBudget

    def require(self, key: str) -> Any:
        if key not in self.payload:
            raise SchemaError(f"missing {key!r}", f"/{key}")
        return self.payload[key]

    def get(self, key: str, default=None) -> Any:
        return self.payload.get(key, default)


@dataclasses.dataclass(frozen=True)
class Report:
    command: str
    field: Field
    result: Dict[str, Any]
    budget: SearchBudget

    def as_dict(self) -> Dict[str, Any]:
        return {
            "wittlab": __version__,
            "command": self.command,
            "field": self.field.descriptor(),
            "budget": self.budget.as_dict(),
            "result": self.result,
        }

    def render(self, output_format: str = "json") -> str:
        if output_format == "jsonl":
            return json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"),
                              ensure_ascii=False, default=str)
        return json.dumps(self.as_dict(), sort_keys=True, indent=2, ensure_ascii=False,
                          default=str)


def parse_field(value: Any) -> Field:
    if value is None:
        value = "Q"
    if isinstance(value, str):
        match = _SQRT_FIELD.match(value.replace(" ", ""))
        if match:
            return field_from_descriptor({"field": "Q(sqrt)", "d": int(match.group(1))})
        return field_from_descriptor({"field": value})
    return field_from_descriptor(value)


def load_payload(path: Optional[str]) -> Dict[str, Any]:
    """Read a request object from a JSON file; an absent path gives an empty payload."""
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise SchemaError(f"invalid JSON: {err.msg} at line {err.lineno}", "")
    if not isinstance(data, dict):
        raise SchemaError("a request is a JSON object", "")
    return data


def build_request(command: str, data: Dict[str, Any], budget: SearchBudget) -> Request:
    payload = dict(data)
    field = parse_field(payload.pop("field", None))
    return Request(command, field, payload, budget)


def split_list(text: Optional[str]) -> Optional[List[str]]:
    """Inline lists are comma-separated, e.g. ``--diag 1,-2,-3,6``."""
    if text is None:
        return None
    items = [item.strip() for item in text.split(",")]
    if any(not item for item in items):
        raise SchemaError(f"empty entry in {text!r}", "")
    return items


def split_pairs(text: Optional[str]) -> Optional[List[List[str]]]:
    """Inline symbol lists, e.g. ``--gens "-1:3,-1:7"``."""
    items = split_list(text)
    if items is None:
        return None
    out = []
    for item in items:
        parts = [p.strip() for p in item.split(":")]
        if len(parts) != 2 or not all(parts):
            raise SchemaError(f"expected a:b, got {item!r}", "")
        out.append(parts)
    return out


def _slots(field: Field, entry: Any, pointer: str, arity: int) -> tuple:
    if not isinstance(entry, (list, tuple)) or len(entry) != arity:
        raise SchemaError(f"a symbol has {arity} slots", pointer)
    return tuple(field.parse(x) for x in entry)


def parse_symbols(field: Field, entries: Any, pointer: str, arity: int = 2) -> List[tuple]:
    if not isinstance(entries, list):
        raise SchemaError("expected a list of symbols", pointer)
    return [_slots(field, entry, f"{pointer}/{n}", arity) for n, entry in enumerate(entries)]


def parse_brauer(field: Field, entries: Any, pointer: str) -> BrauerClass2:
    return BrauerClass2.from_symbols(field, parse_symbols(field, entries, pointer))


def _cores_term(field: Field, data: Any, pointer: str) -> H3Class:
    if not isinstance(data, dict) or not {"K", "mu", "sym"} <= set(data):
        raise SchemaError("a corestriction term needs K, mu and sym", pointer)
    K_data = data["K"]
    if not isinstance(K_data, dict) or "d" not in K_data:
        raise SchemaError("K is an object with an integer d", f"{pointer}/K")
    try:
        K = QuadExtension(field, int(K_data["d"]))
    except (TypeError, ValueError):
        raise SchemaError("K is an object with an integer d", f"{pointer}/K/d")
    x, y = _slots(K.field, data["sym"], f"{pointer}/sym", 2)
    return corestriction(K, K.field.parse(data["mu"]), x, y)


def parse_h3(field: Field, entries: Any, pointer: str) -> H3Class:
    """
    A degree-3 class from a list of terms.

    Terms are bare triples, ``{"sym": [a, b, c]}``, ``{"cores": {"K": {"d": d}, "mu": μ,
    "sym": [x, y]}}`` with ``s`` = √d in K-elements, or ``{"form": [...]}``. The objects
    ``{"h3": [...]}`` and ``H3Class.as_dict()`` output are accepted as well.
    """
    if isinstance(entries, dict):
        key = "h3" if "h3" in entries else "terms"
        if key not in entries:
            raise SchemaError("expected a list of terms under 'h3' or 'terms'", pointer)
        entries, pointer = entries[key], f"{pointer}/{key}"
    if not isinstance(entries, list):
        raise SchemaError("expected a list of terms", pointer)
    out = H3Class.zero(field)
    for n, entry in enumerate(entries):
        where = f"{pointer}/{n}"
        if isinstance(entry, (list, tuple)):
            a, b, c = _slots(field, entry, where, 3)
            out = out + H3Class.symbol(field, a, b, c)
        elif isinstance(entry, dict) and len(entry) == 1 and "sym" in entry:
            a, b, c = _slots(field, entry["sym"], f"{where}/sym", 3)
            out = out + H3Class.symbol(field, a, b, c)
        elif isinstance(entry, dict) and len(entry) == 1 and "cores" in entry:
            out = out + _cores_term(field, entry["cores"], f"{where}/cores")
        elif isinstance(entry, dict) and len(entry) == 1 and "form" in entry:
            out = out + H3Class.from_form(QuadraticForm.parse(field, entry["form"]))
        else:
            raise SchemaError("a term is a triple or one of sym, cores, form", where)
    return out
