"""Structured reports over an algebra file: everything the library can say
about (L, H, g), as JSON-native data with rationals kept as strings."""

from __future__ import annotations

import json
from typing import Any

from . import bismut
from .errors import HktError
from .exactlin import AltForm, Matrix, fmt_scalar, positive_definite
from .hypercx import HypercomplexStructure, abelian_certificate, check_hkt
from .liealg import MetricLieAlgebra, ce_codifferential, ce_d, center, lower_central_series, validate

SCHEMA = "hkt-report/1"
MAX_SLOTS = 12


def _vec(v) -> list[str]:
    return [fmt_scalar(x) for x in v]


def _form(a: AltForm) -> dict:
    return {
        "text": str(a) if not a.is_zero() else "0",
        "terms": [[[k + 1 for k in I], fmt_scalar(c)] for I, c in sorted(a.items())],
    }


def _matrix(M: Matrix) -> list[list[str]]:
    return [_vec(r) for r in M]


def classify_line(L: MetricLieAlgebra, verdict, torsion: str | None) -> str:
    step = lower_central_series(L).step
    parts = ["not nilpotent" if step is None else f"{step}-step"]
    if not verdict.quaternion or not all(verdict.integrable):
        parts.append("not hypercomplex")
    else:
        parts.append("abelian hypercomplex" if verdict.abelian else "non-abelian hypercomplex")
    parts.append(f"HKT: {'yes' if verdict.hkt else 'no'}")
    if torsion is not None:
        parts.append(f"torsion: {torsion}")
    return "; ".join(parts)


def build_report(L: MetricLieAlgebra, H: HypercomplexStructure | None) -> dict[str, Any]:
    g = L.metric
    rep: dict[str, Any] = {"schema": SCHEMA, "dim": L.dim}
    val = validate(L)
    rep["validation"] = {
        "ok": val.ok,
        "jacobi_violations": [
            {"triple": [a + 1 for a in t], "jacobiator": _vec(v)} for t, v in val.jacobi_violations
        ],
        "metric_positive_definite": val.metric_positive_definite,
    }
    if not val.ok:
        return rep
    series = lower_central_series(L)
    rep["nilpotency"] = {
        "nilpotent": series.nilpotent,
        "step": series.step,
        "series_dims": [S.dim for S in series.terms],
    }
    rep["center"] = [_vec(v) for v in center(L).basis]
    if H is None:
        return rep

    verdict = check_hkt(L, H, g)
    rep["hypercomplex"] = {
        "quaternion": verdict.quaternion,
        "compatible": verdict.compatible,
        "integrable": list(verdict.integrable),
        "abelian": verdict.abelian,
    }
    rep["hkt"] = {
        "hkt": verdict.hkt,
        "identity_holds": verdict.eq3,
        "failed_gate": verdict.failed_gate,
        "witness": verdict.witness.describe() if verdict.witness else None,
    }
    torsion_kind = None
    if verdict.hkt:
        conn = bismut.bismut_connection(L, H, g)
        rep["connection"] = [
            {"direction": i + 1, "argument": j + 1, "value": {str(k + 1): fmt_scalar(v) for k, v in sorted(t.items())}}
            for i, j, t in conn.entries()
        ]
        c = bismut.torsion_form(L, conn, g)
        torsion_kind = bismut.classify_strong_weak(L, c, H, g)
        rep["torsion"] = _form(c)
        rep["dc"] = _form(ce_d(L, c))
        rep["strong_weak"] = torsion_kind
        rep["codifferential_c"] = _form(ce_codifferential(L, c))
        if positive_definite(g):
            rho = bismut.ricci(L, bismut.curvature(L, conn), g)
            rep["ricci"] = {
                "matrix": _matrix(rho.matrix),
                "symmetric": rho.symmetric,
                "char_poly": _vec(bismut.ricci_char_poly(rho, g)),
            }
        rep["lee_forms"] = [_vec(t) for t in bismut.lee_forms(L, H, c, g)]
        slots = bismut.nonzero_slots(bismut.covariant_derivative(conn, c))
        rep["nabla_c"] = {
            "parallel": not slots,
            "witness_slots": [
                {"direction": i + 1, "slot": [k + 1 for k in I], "value": fmt_scalar(v)}
                for i, I, v in slots[:MAX_SLOTS]
            ],
            "nonzero_slot_count": len(slots),
        }
        if series.nilpotent and series.step is not None and series.step <= 2:
            try:
                cert = abelian_certificate(L, H, g)
            except HktError as exc:
                rep["certificate"] = {"error": str(exc)}
            else:
                rep["certificate"] = {
                    "ok": cert.ok,
                    "steps": [{"name": s.name, "ok": s.ok, "detail": s.detail} for s in cert.steps],
                }
    rep["classification"] = classify_line(L, verdict, torsion_kind)
    return rep


def to_json(rep: dict) -> str:
    return json.dumps(rep, indent=1, sort_keys=True) + "\n"


def to_human(rep: dict) -> str:
    out = [f"dimension {rep['dim']}"]
    val = rep["validation"]
    if not val["ok"]:
        out.append("Jacobi identity fails:")
        for v in val["jacobi_violations"]:
            out.append(f"  (e{v['triple'][0]}, e{v['triple'][1]}, e{v['triple'][2]}): {' '.join(v['jacobiator'])}")
        return "\n".join(out) + "\n"
    nil = rep["nilpotency"]
    out.append(f"nilpotent: {nil['nilpotent']}, step {nil['step']}, series dims {nil['series_dims']}")
    out.append(f"center dimension {len(rep['center'])}")
    if "hypercomplex" in rep:
        h = rep["hypercomplex"]
        out.append(
            f"quaternion relations: {h['quaternion']}; compatible: {h['compatible']}; "
            f"integrable: {h['integrable']}; abelian: {h['abelian']}"
        )
        k = rep["hkt"]
        out.append(f"HKT: {k['hkt']}" + (f" ({k['witness']})" if k["witness"] else ""))
    if "torsion" in rep:
        out.append(f"torsion 3-form: {rep['torsion']['text']}")
        out.append(f"dc: {rep['dc']['text']}  ({rep['strong_weak']})")
        out.append(f"codifferential of c: {rep['codifferential_c']['text']}")
        out.append("Bismut connection:")
        for e in rep["connection"]:
            terms = " + ".join(f"{v}*e{k}" for k, v in e["value"].items())
            out.append(f"  nabla_e{e['direction']} e{e['argument']} = {terms}")
        if "ricci" in rep:
            out.append(f"Ricci symmetric: {rep['ricci']['symmetric']}")
            out.append(f"Ricci characteristic polynomial: {' '.join(rep['ricci']['char_poly'])}")
        zero_lee = all(all(x == "0" for x in t) for t in rep["lee_forms"])
        out.append(f"Lee forms vanish: {zero_lee}")
        nc = rep["nabla_c"]
        if nc["parallel"]:
            out.append("torsion is parallel")
        else:
            w = nc["witness_slots"][0]
            slot = ",".join(f"e{k}" for k in w["slot"])
            out.append(f"torsion not parallel: (nabla_e{w['direction']} c)({slot}) = {w['value']}")
        if "certificate" in rep:
            cert = rep["certificate"]
            if "error" in cert:
                out.append(f"certificate: {cert['error']}")
            else:
                for s in cert["steps"]:
                    out.append(f"  [{'ok' if s['ok'] else 'FAIL'}] {s['name']}" + (f" ({s['detail']})" if s["detail"] else ""))
    if "classification" in rep:
        out.append(rep["classification"])
    return "\n".join(out) + "\n"
