"""Explicit constraint systems for both model variants, and LP-file export.

The base model carries one row per conflict tuple; the strong model replaces
those rows with at-most-one group constraints.  Objective coefficients are
folded per variable before export (alpha * length - beta for working
variables, alpha * length for protection), which keeps files minimal and
loses nothing.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass

from .conflicts import ConflictSets, StrongGroups
from .instance import Instance, PROTECTION, WORKING


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[int, int], ...]  # (variable index, coefficient)
    relation: str  # "=" or "<="
    rhs: int


@dataclass(frozen=True)
class LinearModel:
    """A minimization model with binary variables and integer coefficients."""

    kind: str  # "base" or "strong"
    objective: tuple[int, ...]  # folded coefficient per variable
    constraints: tuple[Constraint, ...]
    var_names: tuple[str, ...]


def variable_names(instance: Instance) -> tuple[str, ...]:
    names = []
    for i in range(instance.n_vars):
        r, kind, local = instance.var_info(i)
        names.append(f"x_r{r}_w{local}" if kind == WORKING else f"y_r{r}_p{local}")
    return tuple(names)


def _common_rows(instance: Instance) -> list[Constraint]:
    rows = []
    for req in instance.requests:
        terms = [(instance.var_of(req.id, WORKING, w), 1) for w in range(len(req.working))]
        terms += [(instance.var_of(req.id, PROTECTION, p), -1) for p in range(len(req.protection))]
        rows.append(Constraint(name=f"match_r{req.id}", terms=tuple(terms), relation="=", rhs=0))
    for req in instance.requests:
        terms = tuple((instance.var_of(req.id, WORKING, w), 1) for w in range(len(req.working)))
        rows.append(Constraint(name=f"single_r{req.id}", terms=terms, relation="<=", rhs=1))
    return rows


def build_ip(
    instance: Instance,
    structure: ConflictSets | StrongGroups,
    alpha: int,
    beta: int,
    kind: str = "base",
) -> LinearModel:
    """Materialize the base (pairwise) or strong (grouped) model."""
    if alpha < 0 or beta < 0:
        raise ValueError("weights must be non-negative")
    objective = tuple(
        alpha * instance.lightpath_at(i).length - (beta if instance.var_info(i)[1] == WORKING else 0)
        for i in range(instance.n_vars)
    )
    rows = _common_rows(instance)
    if kind == "base":
        if not isinstance(structure, ConflictSets):
            raise TypeError("base model requires ConflictSets")
        for t, (r, w, p) in enumerate(structure.c1):
            rows.append(Constraint(f"c1_{t}", ((instance.var_of(r, WORKING, w), 1), (instance.var_of(r, PROTECTION, p), 1)), "<=", 1))
        for t, (r1, r2, w, p) in enumerate(structure.c2):
            rows.append(Constraint(f"c2_{t}", ((instance.var_of(r1, WORKING, w), 1), (instance.var_of(r2, PROTECTION, p), 1)), "<=", 1))
        for t, (r1, r2, w1, w2) in enumerate(structure.c3):
            rows.append(Constraint(f"c3_{t}", ((instance.var_of(r1, WORKING, w1), 1), (instance.var_of(r2, WORKING, w2), 1)), "<=", 1))
        for t, (r1, r2, p1, p2) in enumerate(structure.c4):
            rows.append(Constraint(f"c4_{t}", ((instance.var_of(r1, PROTECTION, p1), 1), (instance.var_of(r2, PROTECTION, p2), 1)), "<=", 1))
    elif kind == "strong":
        if not isinstance(structure, StrongGroups):
            raise TypeError("strong model requires StrongGroups")
        for (r, w), plist in sorted(structure.pbar.items()):
            terms = [(instance.var_of(r, WORKING, w), 1)]
            terms += [(instance.var_of(r, PROTECTION, p), 1) for p in plist]
            rows.append(Constraint(f"excl_r{r}_w{w}", tuple(terms), "<=", 1))
        for (e, lam), members in structure.emitted_groups():
            terms = tuple((i, 1) for i in members)
            rows.append(Constraint(f"slot_e{e}_l{lam}", terms, "<=", 1))
    else:
        raise ValueError(f"unknown model kind {kind!r}")
    return LinearModel(
        kind=kind,
        objective=objective,
        constraints=tuple(rows),
        var_names=variable_names(instance),
    )


def _format_terms(terms: list[tuple[int, str]]) -> str:
    parts: list[str] = []
    for coeff, name in terms:
        if coeff == 0:
            continue
        sign = "-" if coeff < 0 else "+"
        mag = abs(coeff)
        if not parts:
            lead = "- " if coeff < 0 else ""
            parts.append(f"{lead}{mag} {name}")
        else:
            parts.append(f"{sign} {mag} {name}")
    return " ".join(parts)


def lp_text(model: LinearModel) -> str:
    """Render the model in CPLEX LP syntax with deterministic row order."""
    lines = ["Minimize"]
    obj_terms = [(c, model.var_names[i]) for i, c in enumerate(model.objective)]
    lines.append(f" obj: {_format_terms(obj_terms)}".rstrip())
    lines.append("Subject To")
    for row in model.constraints:
        body = _format_terms([(c, model.var_names[i]) for i, c in row.terms])
        rel = "=" if row.relation == "=" else "<="
        lines.append(f" {row.name}: {body} {rel} {row.rhs}")
    lines.append("Binary")
    for name in model.var_names:
        lines.append(f" {name}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def export_lp(model: LinearModel, destination: str) -> None:
    """Write the LP file atomically (temp file + rename)."""
    directory = os.path.dirname(os.path.abspath(destination))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".lp.tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(lp_text(model))
        os.replace(tmp, destination)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
