"""Serializable reports for the command-line front end."""
from __future__ import annotations

import json
import platform
from dataclasses import asdict, dataclass, field, fields

from .classify import ClassificationReport
from .graph import format_graph
from .linalg import BACKEND, Matrix, format_rational


def _vec(v) -> list:
    return [format_rational(x) for x in v]


def _mat(m: Matrix) -> list:
    return [_vec(r) for r in m.rows()]


def versions() -> dict:
    from . import __version__
    return {"graphnil": __version__, "python": platform.python_version(), "kernel": BACKEND}


@dataclass
class Report:
    """Plain-data report; every field holds JSON-native values only."""
    command: str
    graph: str = ""
    provenance: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    sections: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "Report":
        known = {f.name for f in fields(cls)}
        extra = set(doc) - known
        if extra:
            raise ValueError(f"unknown report fields: {sorted(extra)}")
        if "command" not in doc:
            raise ValueError("report needs a 'command' field")
        return cls(**doc)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def render_text(self) -> str:
        out = [f"== {self.command} =="]
        if self.verdicts:
            out.append("verdicts:")
            out += [f"  {k}: {_show(v)}" for k, v in self.verdicts.items()]
        if self.witnesses:
            out.append("witnesses:")
            out += [f"  {k}: {_show(v)}" for k, v in self.witnesses.items()]
        for name, body in self.sections.items():
            out.append(f"{name}:")
            if isinstance(body, list):
                out += [f"  {_show(x)}" for x in body]
            elif isinstance(body, dict):
                out += [f"  {k}: {_show(v)}" for k, v in body.items()]
            else:
                out.append(f"  {_show(body)}")
        out += [f"note: {n}" for n in self.notes]
        if self.provenance:
            out.append("provenance: " + ", ".join(f"{k}={_show(v)}" for k, v in self.provenance.items()))
        return "\n".join(out)


def _show(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return "[" + ", ".join(_show(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_show(x)}" for k, x in v.items()) + "}"
    return str(v)


def from_classification(rep: ClassificationReport, command: str = "check", provenance=None) -> Report:
    witnesses = {}
    if rep.cluster.witness:
        i, j = rep.cluster.witness
        witnesses["cluster"] = f"not a cluster graph: edge {i}-{j} joins non-equivalent vertices"
    if not rep.nr.ok:
        witnesses["nr"] = {"condition": rep.nr.failed_condition,
                           "indices": list(rep.nr.indices) if rep.nr.indices else None,
                           "detail": rep.nr.detail}
    if rep.go.is_no:
        z, x = rep.go.witness
        witnesses["gordon"] = {"pair": rep.go.witness_label, "Z": _vec(z), "X": _vec(x),
                               "farkas": _vec(rep.go.certificate) if rep.go.certificate else None}
    semi = {"ok": rep.semi.ok}
    if rep.semi.ok:
        semi["coefficients"] = [None if c is None else format_rational(c) for c in rep.semi.coefficients]
        semi["center"] = _mat(rep.semi.center) if rep.semi.center is not None else None
    else:
        semi["condition"] = rep.semi.failed_condition
        semi["detail"] = rep.semi.detail
    return Report(
        command=command,
        graph=format_graph(rep.graph),
        provenance=dict(provenance or {}, **versions()),
        verdicts={
            "GO": rep.is_go,
            "NR": rep.nr.ok,
            "cluster": rep.cluster.is_cluster,
            "semi_standard": rep.semi.ok,
            "gordon_sampling": rep.go.tag,
            "gordon_pairs_tested": rep.go.tested,
            "agree": rep.agree,
        },
        witnesses=witnesses,
        sections={"semi_standard": semi},
        notes=list(rep.notes),
    )
