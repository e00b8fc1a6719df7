"""Verification reports, the counterexample quarantine, and rendering.

JSON is the authoritative format: keys are sorted and the only field
that varies between runs with the same seed is "timing_ms". CSV
flattens one row per grid point or instance. The text format is
Markdown rendered from a Jinja2 template; html is that Markdown
converted with `markdown`.
"""

import csv
import io
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import markdown as markdown_lib
from jinja2 import Environment, FileSystemLoader
from markupsafe import Markup, escape

from .config import TEMPLATES_DIRPATH

FORMATS = ("json", "csv", "text", "html")

VERDICTS = ("pass", "fail", "skipped", "unknown", "exception")


@dataclass
class VerificationReport:
    """Outcome of a verifier, audit or lemma-suite run.

    `counts` always satisfies pass + fail + skipped + unknown +
    exception = instances. "exception" counts instances that are the
    extremal graph a theorem excludes.
    """

    task: str
    params: dict
    seed: int
    tolerances: dict
    counts: dict = field(default_factory=lambda: dict.fromkeys(VERDICTS, 0))
    counterexamples: list = field(default_factory=list)
    grid: list = field(default_factory=list)
    exploratory: bool = False
    extra: dict = field(default_factory=dict)
    timing_ms: float = 0.0
    ok: bool = True

    def tally(self, verdict):
        self.counts[verdict] += 1

    @property
    def instances(self):
        return sum(self.counts.values())

    @property
    def passed(self):
        return self.ok and self.counts["fail"] == 0 and not self.counterexamples

    def to_dict(self):
        document = {
            "task": self.task,
            "params": self.params,
            "seed": self.seed,
            "tolerances": self.tolerances,
            "counts": self.counts,
            "instances": self.instances,
            "counterexamples": self.counterexamples,
            "grid": self.grid,
            "exploratory": self.exploratory,
            "passed": self.passed,
            "timing_ms": self.timing_ms,
        }
        document.update(self.extra)
        return document


class Quarantine:
    """Append-only JSON Lines file of counterexamples, synced per write
    so that a crash later in the run cannot lose them."""

    def __init__(self, filepath):
        self.filepath = Path(filepath)
        self.written = 0

    def write(self, task, graph6, witness):
        record = {"task": task, "graph6": graph6, "witness": witness}
        with open(self.filepath, "a") as f:
            f.write(json.dumps(to_jsonable(record), sort_keys=True) + "\n")
            f.flush()
            os.fsync(f.fileno())
        self.written += 1


def to_jsonable(value):
    """Recursively convert Fractions, tuples, bytes and objects with
    `to_dict` into JSON-encodable values."""
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator}
    if isinstance(value, bytes):
        return value.decode("ascii")
    if isinstance(value, float) and value != value:
        return None
    if hasattr(value, "item"):
        return value.item()
    return value


def render_json(document):
    return json.dumps(to_jsonable(document), sort_keys=True, indent=2) + "\n"


def _cell(value):
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)
    return value


def render_csv(document):
    """One row per grid entry; documents without a grid become one row
    of their scalar fields."""
    document = to_jsonable(document)
    rows = document.get("grid") or [
        {k: v for k, v in document.items() if not isinstance(v, (dict, list))}]
    fieldnames = sorted({key for row in rows for key in row})
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(v) for k, v in row.items()})
    return out.getvalue()


def _environment():
    return Environment(
        loader=FileSystemLoader(str(TEMPLATES_DIRPATH)),
        autoescape=False,
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )


def render_text(document):
    """Markdown summary of a report or result document."""
    document = to_jsonable(document)
    scalars = {k: v for k, v in document.items()
               if not isinstance(v, (dict, list)) and k != "grid"}
    sections = {k: v for k, v in document.items()
                if isinstance(v, dict) and k not in ("counts", "config")}
    template = _environment().get_template("report.md.j2")
    return template.render(
        document=document,
        scalars=scalars,
        sections=sections,
        counts=document.get("counts"),
        counterexamples=document.get("counterexamples") or [],
        grid=document.get("grid") or [],
        dumps=lambda v: json.dumps(v, sort_keys=True),
    )


def render_html(document):
    converter = markdown_lib.Markdown(extensions=["tables", "fenced_code"])
    body = Markup(converter.convert(render_text(document)))
    title = escape(str(to_jsonable(document).get("task", "report")))
    return (f"<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
            f"<title>{title}</title>\n</head>\n<body>\n{body}\n</body>\n</html>\n")


def render(document, format="json"):
    if format == "json":
        return render_json(document)
    if format == "csv":
        return render_csv(document)
    if format == "text":
        return render_text(document)
    if format == "html":
        return render_html(document)
    raise ValueError(f"format must be one of {FORMATS}, got {format!r}")
