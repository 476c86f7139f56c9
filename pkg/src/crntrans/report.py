"""Report sections as plain, deterministic data.

Every builder returns nested dicts/lists of str, int, bool, float and None.
Exact rationals are rendered as strings ("3/2").  The JSON and text outputs
are both produced from the same data, so they always carry the same numbers.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping, Sequence

from . import linalg
from .cone import extreme_currents
from .graph import deficiency, is_reversible, is_weakly_reversible, linkage_classes
from .model import Network
from .steady import (
    ResidualReport,
    SignConditionReport,
    binomial_generators,
    describe_binomials,
    format_sign,
    parametrization,
)
from .translation import Candidate, ResolvabilityReport, Translation, TranslationClassification, serialize_translation
from .trees import tree_constants

SCHEMA = "crntrans-report/1"


def number(v) -> Any:
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, int):
        return v
    return float(v)


def reversibility(net: Network) -> str:
    if is_reversible(net):
        return "reversible"
    return "weakly reversible" if is_weakly_reversible(net) else "not weakly reversible"


def network_section(net: Network) -> dict:
    d = deficiency(net)
    part = linkage_classes(net)
    return {
        "name": net.name,
        "species": list(net.species),
        "complexes": [net.complex_str(j) for j in range(net.n)],
        "reactions": [f"R{i + 1}: {net.reaction_str(i)}" for i in range(net.r)],
        "m": net.m,
        "n": net.n,
        "r": net.r,
        "linkage_classes": d.l,
        "rank": d.s,
        "deficiency": d.delta_structural,
        "deficiency_kernel": d.delta_kernel,
        "reversibility": reversibility(net),
        "strong_linkage_classes": [[j + 1 for j in c] for c in part.strong_classes],
    }


def generators_section(net: Network) -> list[dict]:
    out = []
    for k, e in enumerate(extreme_currents(net), 1):
        out.append(
            {
                "name": f"E{k}",
                "kind": e.kind.value,
                "vector": list(e.vector),
                "support": [f"R{i + 1}" for i in e.support],
            }
        )
    return out


def _resolvability(rep: ResolvabilityReport | None, net: Network) -> dict | None:
    if rep is None:
        return None
    factors = {}
    for i in sorted(rep.simplified):
        num, den, L = rep.simplified[i]
        text = f"({num})/({den})" if str(den) != "1" else f"{num}"
        factors[f"R{i + 1}"] = text if L == 1 else f"({text})^(1/{L})"
    return {
        "improper_subspace": [list(v) for v in rep.SI_basis.basis],
        "weakly_resolvable": rep.weakly_resolvable,
        "strongly_resolvable": rep.strongly_resolvable,
        "kinetic_pairs": [[net.complex_str(p), net.complex_str(q)] for p, q in rep.pair_basis],
        "adjustment_factors": factors,
    }


def translation_section(t: Translation, cls: TranslationClassification, rep: ResolvabilityReport | None) -> dict:
    tn = t.network
    src = t.source
    complexes = []
    for jt in range(tn.n):
        ks = t.kinetic_source(jt)
        complexes.append(
            {
                "complex": tn.complex_str(jt),
                "kinetic": src.complex_str(ks) if ks is not None else None,
                "preimage": [src.complex_str(p) for p in t.preimage(jt)],
            }
        )
    return {
        "proper": cls.proper,
        "strong": cls.strong,
        "deficiency": cls.delta,
        "kinetic_deficiency": cls.kinetic_delta,
        "improper_complexes": [tn.complex_str(j) for j in cls.improper_complexes],
        "improper_reactions": [f"R{i + 1}" for i in cls.improper_reactions],
        "shifts": t.describe_shifts(),
        "translated_complexes": complexes,
        "translated_reactions": [tn.reaction_str(i) for i in range(tn.r)],
        "translation_file": serialize_translation(t).splitlines(),
        "resolvability": _resolvability(rep, src),
    }


def candidates_section(cands: Sequence[Candidate]) -> list[dict]:
    return [dict(rank=k, tier=c.tier, **translation_section(c.translation, c.classification, c.resolvability))
            for k, c in enumerate(cands, 1)]


def tree_constants_section(net: Network, rates: Mapping | None = None) -> list[dict]:
    tc = tree_constants(net, rates)
    out = []
    for j, p in enumerate(tc.per_complex):
        row = {"complex": net.complex_str(j), "linkage_class": tc.linkage_class[j] + 1, "symbolic": str(p)}
        if tc.values is not None:
            row["value"] = number(tc.values[j])
        out.append(row)
    return out


def binomials_section(t: Translation, rates: Mapping | None = None, anchors=None) -> dict:
    sym = binomial_generators(t, None, anchors)
    out = {"variables": [f"x{i + 1} = [{s}]" for i, s in enumerate(t.source.species)],
           "symbolic": describe_binomials(t, sym)}
    if rates is not None:
        out["numeric"] = describe_binomials(t, binomial_generators(t, rates, anchors))
    return out


def parametrization_section(t: Translation) -> dict:
    par = parametrization(t)

    def rows(b: linalg.SubspaceBasis):
        return [list(v) for v in b.basis]

    return {
        "S": rows(par.S),
        "S_perp": rows(par.S_perp),
        "S_tilde": rows(par.S_tilde),
        "S_tilde_perp": rows(par.S_tilde_perp),
        "positive_steady_states": "ln(x) - ln(x*) in span(S_tilde_perp)",
    }


def sign_section(uniq: SignConditionReport | None, multi: SignConditionReport | None, note: str = "") -> dict:
    out: dict = {}
    if uniq is not None:
        out["uniqueness"] = {
            "hypothesis_holds": uniq.holds,
            "sign_compatible": uniq.sign_compatible,
            "positive_conservation_law": uniq.positive_conservation,
            "witness": format_sign(uniq.witness) if uniq.witness else None,
            "conclusion": uniq.note,
        }
    if multi is not None:
        out["multistationarity"] = {
            "hypothesis_holds": multi.holds,
            "witness": format_sign(multi.witness) if multi.witness else None,
            "conclusion": multi.note,
        }
    if note:
        out["note"] = note
    return out


def residual_section(net: Network, x: Sequence, rep: ResidualReport) -> dict:
    return {
        "state": {s: number(v) for s, v in zip(net.species, x)},
        "residual_inf": rep.residual_inf,
        "relative_residual": rep.relative_residual,
        "per_species": {s: v for s, v in zip(net.species, rep.per_species)},
        "decomposes_over_extreme_currents": bool(rep.decomposes),
        "current_weights": {f"E{k}": w for k, w in enumerate(rep.weights, 1)},
    }


def envelope(command: str, body: dict, meta: Mapping | None = None) -> dict:
    return {"schema": SCHEMA, "command": command, **({"options": dict(meta)} if meta else {}), **body}


# ---------------------------------------------------------------------------
# rendering


def to_json(report: Mapping) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _flat(v) -> bool:
    """Short lists of scalars are printed on one line."""
    if not isinstance(v, list) or any(isinstance(x, (dict, list)) for x in v):
        return False
    return sum(len(str(x)) + 2 for x in v) <= 72


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return repr(v)
    if _flat(v):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def _render(obj, indent: int, lines: list[str]) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        for k, v in obj.items():
            label = str(k).replace("_", " ")
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{label}:")
                _render(v, indent + 1, lines)
            else:
                lines.append(f"{pad}{label}: {_scalar(v)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, dict):
                first = True
                sub: list[str] = []
                _render(item, indent + 1, sub)
                for ln in sub:
                    lines.append((pad + "- " + ln.lstrip()) if first else ln)
                    first = False
            elif isinstance(item, list) and not _flat(item):
                lines.append(f"{pad}-")
                _render(item, indent + 1, lines)
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(pad + _scalar(obj))


def to_text(report: Mapping) -> str:
    lines: list[str] = []
    _render({k: v for k, v in report.items() if k != "schema"}, 0, lines)
    return "\n".join(lines) + "\n"
