"""Python access to the seqc robot action-sequence compiler."""

import json
import os
from pathlib import Path

from . import _seqc
from ._seqc import Dsl, Program, SeqcError, export_dot, save_dsl, save_program, topological_order

__all__ = [
    "Dsl",
    "Program",
    "SeqcError",
    "export_dot",
    "generate",
    "load_dsl",
    "load_program",
    "parse_program",
    "save_dsl",
    "save_program",
    "simulate",
    "topological_order",
    "validate",
]

# args are (message, code, line, subjects)
SeqcError.code = property(lambda self: self.args[1] if len(self.args) > 1 else None)
SeqcError.line = property(lambda self: self.args[2] if len(self.args) > 2 else 0)
SeqcError.subjects = property(lambda self: list(self.args[3]) if len(self.args) > 3 else [])
SeqcError.__str__ = lambda self: str(self.args[0]) if self.args else ""


def _text(source):
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8")
    return source


def load_dsl(source):
    """Loads a robot-class DSL from XML text or a Path."""
    return _seqc.load_dsl(_text(source))


def load_program(source, dsl):
    return _seqc.load_program(_text(source), dsl)


def parse_program(source):
    """Structure only, no DSL checks."""
    return _seqc.parse_program(_text(source))


def validate(program, dsl):
    return json.loads(_seqc.validate_json(program, dsl))


def simulate(program, dsl, durations=None, default=1, force=False):
    return json.loads(_seqc.simulate_json(program, dsl, dict(durations or {}), default, force))


def generate(program, dsl, config, lenient=False, search_roots=None):
    """Renders a generator config. Returns {"files": {name: text}, "warnings": [...]}."""
    if search_roots is None:
        search_roots = [p for p in os.environ.get("SEQC_TEMPLATE_PATH", "").split(":") if p]
    files, warnings = _seqc.generate(program, dsl, Path(config), [Path(p) for p in search_roots], lenient)
    return {"files": files, "warnings": warnings}
