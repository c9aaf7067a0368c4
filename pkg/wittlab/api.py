"""Workers behind the wittlab command line."""
import dataclasses
import sys
from typing import Any, Callable, Dict, List, Optional

import click
from rich import print as rprint
from rich.console import Console
from rich.json import JSON
from rich.panel import Panel

from .cohomology import BrauerClass2, H3Class, ModClass
from .config import SearchBudget, use_budget
from .deg8 import (Involution8, decompose8, e3_f3_deg8, quadsplit8, quadsplit8_converse,
                   triality_components, triality_e3_equality)
from .deg12 import (Involution12, decompose12, e3_f3_deg12, homology_generator,
                    isotropic_decomposition_group, isotropy_by_e3, quad_split_report)
from .errors import ConditionEqCViolated, SchemaError, WittlabError
from .fields import QuadNumberField, RationalFunctionField, Rationals, squarefree_part
from .hermitian import (SkewHermitianForm, herm_invariants, hyperbolic_h, isotropic_h,
                        witt_index_h)
from .qforms import (QuadraticForm, clifford_symbols, e1, ideal_layer, isotropic,
                     isotropic_vector, pfister_decompose_12, signatures, witt_decompose,
                     witt_is_zero)
from .quatgroups import (descent_criterion, f3_of_group, n_U, norm_descent, peyre_verdict,
                         quadratic_splitting, subgroup, xi_construct)
from .schema import (Report, Request, build_request, load_payload, parse_brauer, parse_h3,
                     parse_symbols)

console = Console()


@dataclasses.dataclass
class Settings:
    output_format: str = "json"
    seed: Optional[int] = None
    threads: Optional[int] = None
    budget_text: Optional[str] = None
    verbose: bool = False

    def as_dict(self):
        return dataclasses.asdict(self)

    def budget(self) -> SearchBudget:
        base = SearchBudget.parse(self.budget_text) if self.budget_text else SearchBudget.from_env()
        return base.replace(seed=self.seed, threads=self.threads)


def display_panel_message(title: str, message, color: str = "green"):
    rprint(Panel.fit(
        message,
        title=title,
        border_style=color
    ))


def emit(report: Report, output_format: str) -> None:
    if output_format == "pretty":
        display_panel_message(report.command, JSON(report.render("json")))
        return
    click.echo(report.render(output_format))


def run_worker(settings: Settings, command: str, path: Optional[str],
               inline: Callable[[], Dict[str, Any]],
               compute: Callable[[Request], Dict[str, Any]]) -> None:
    """
    Build the request, run ``compute`` under the request budget and print the report.

    Args:
        settings (Settings): global CLI options.
        command (str): command echo for the report, e.g. ``"deg12 invariants"``.
        path (Optional[str]): JSON request file, if any.
        inline (Callable[[], Dict[str, Any]]): parses the inline options; values that are
            not None override the file.
        compute (Callable[[Request], Dict[str, Any]]): produces the result object.
    """
    try:
        data = load_payload(path)
        data.update({k: v for k, v in inline().items() if v is not None})
        budget = settings.budget()
        request = build_request(command, data, budget)
        with use_budget(budget):
            result = compute(request)
        emit(Report(command, request.field, result, budget), settings.output_format)
    except WittlabError as err:
        display_panel_message("Error", f"{type(err).__name__}: {err.message}", "red")
        sys.exit(err.exit_code)
    except Exception:
        console.print_exception()
        sys.exit(1)


# ---------------------------------------------------------------- helpers

def _form(request: Request) -> QuadraticForm:
    entries = request.require("diag")
    if not isinstance(entries, list):
        raise SchemaError("diag must be a list", "/diag")
    return QuadraticForm.parse(request.field, entries)


def _residue_table(c: H3Class) -> Optional[List[Dict[str, Any]]]:
    F = c.field
    if not isinstance(F, RationalFunctionField):
        return None
    table = []
    for pi in F.support(c.normal_form().diag):
        table.append({"pi": str(pi.as_expr()), "residue": c.residue(pi).as_dict()})
    return table


def _group(request: Request):
    F = request.field
    gens = [BrauerClass2(F, (s,)) for s in parse_symbols(F, request.require("gens"), "/gens")]
    known = parse_symbols(F, request.get("known", []), "/known")
    return subgroup(gens, known=known, field=F)


# ---------------------------------------------------------------- qform

def qform_invariants(request: Request) -> Dict[str, Any]:
    q = _form(request)
    F = q.field
    layer = ideal_layer(q)
    out: Dict[str, Any] = {"form": q.format(), "dim": q.dim, "layer": layer}
    if q.dim % 2 == 0:
        out["e1"] = str(e1(q))
    if layer >= 2:
        out["e2"] = BrauerClass2.from_symbols(F, clifford_symbols(q)).as_dict()
    if layer >= 3:
        e3 = H3Class.from_form(q)
        out["e3"] = e3.as_dict()
        if F.is_number_field:
            out["e3"]["real_values"] = {str(v): n for v, n in e3.real_values().items()}
        else:
            out["e3"]["residues"] = _residue_table(e3)
    if F.is_number_field:
        out["signatures"] = {str(v): s for v, s in signatures(q)}
    return out


def qform_isotropy(request: Request) -> Dict[str, Any]:
    q = _form(request)
    out: Dict[str, Any] = {"form": q.format(), "isotropic": isotropic(q)}
    if out["isotropic"] and request.get("vector", True):
        out["vector"] = [q.field.format(x) for x in isotropic_vector(q)]
    return out


def qform_witt(request: Request) -> Dict[str, Any]:
    q = _form(request)
    if not q.field.is_number_field:
        return {"form": q.format(), "witt_zero": witt_is_zero(q)}
    w = witt_decompose(q)
    return {"form": q.format(), "kernel": w.kernel.format(), "index": w.index,
            "witt_zero": w.is_zero()}


def qform_decompose12(request: Request) -> Dict[str, Any]:
    q = _form(request)
    F = q.field
    blocks = pfister_decompose_12(q)
    return {"blocks": [{"alpha": F.format(alpha), "pfister": [F.format(x) for x in n.slots]}
                       for alpha, n in blocks]}


# ---------------------------------------------------------------- group / xi

def group_f3u(request: Request) -> Dict[str, Any]:
    U = _group(request)
    f3 = f3_of_group(U)
    return {"group": U.as_dict(), "n_U": n_U(U).format(), "f3": f3.as_dict(),
            "residues": _residue_table(f3)}


def group_split(request: Request) -> Dict[str, Any]:
    U = _group(request)
    return {"group": U.as_dict(), "splitting": quadratic_splitting(U).as_dict(U.field)}


def group_peyre(request: Request) -> Dict[str, Any]:
    U = _group(request)
    seed = None
    if "e3" in request.payload:
        seed = ModClass(parse_h3(U.field, request.payload["e3"], "/e3"))
    return {"group": U.as_dict(), "verdict": peyre_verdict(U, e3_seed=seed).as_dict(U.field)}


def xi(request: Request) -> Dict[str, Any]:
    """ξ construction over ℚ; ``x`` and ``y`` are written in ``s`` = √a."""
    k = Rationals()
    a, b, c = (k.parse(request.require(key)) for key in ("a", "b", "c"))
    L = QuadNumberField(squarefree_part(a))
    x, y = (L.parse(request.require(key)) for key in ("x", "y"))
    C = parse_brauer(k, request.get("C", []), "/C")
    construction = xi_construct(a, b, c, x, y, C=C, split=bool(request.get("split", True)))
    out = construction.as_dict()
    found = norm_descent(construction, C)
    out["norm_descent"] = None if found is None else k.format(found)
    if "witnesses" in request.payload:
        witnesses = parse_symbols(k, request.payload["witnesses"], "/witnesses")
        out["descent_criterion"] = descent_criterion(C, a, witnesses)
    return out


# ---------------------------------------------------------------- herm

def _herm(request: Request) -> SkewHermitianForm:
    return SkewHermitianForm.parse(request.field, request.payload)


def herm_invariant_report(request: Request) -> Dict[str, Any]:
    return herm_invariants(_herm(request)).as_dict()


def herm_isotropy(request: Request) -> Dict[str, Any]:
    h = _herm(request)
    return {"form": h.as_dict(), "witt_index": witt_index_h(h), "isotropic": isotropic_h(h),
            "hyperbolic": hyperbolic_h(h)}


# ---------------------------------------------------------------- deg12

def _inv12(request: Request) -> Involution12:
    return Involution12.parse(request.field, request.payload)


def deg12_decompose(request: Request) -> Dict[str, Any]:
    inv = _inv12(request)
    out = decompose12(inv).as_dict()
    small = isotropic_decomposition_group(inv)
    out["small_group"] = small.group.as_dict() if small else None
    return out


def deg12_invariants(request: Request) -> Dict[str, Any]:
    invariants = e3_f3_deg12(_inv12(request))
    out = invariants.as_dict()
    out["f3_residues"] = _residue_table(invariants.f3)
    return out


def deg12_isotropy(request: Request) -> Dict[str, Any]:
    inv = _inv12(request)
    return isotropy_by_e3(inv).as_dict(inv.field)


def deg12_peyre(request: Request) -> Dict[str, Any]:
    return homology_generator(_inv12(request)).as_dict()


def deg12_quadsplit(request: Request) -> Dict[str, Any]:
    inv = _inv12(request)
    return quad_split_report(inv).as_dict(inv.field)


# ---------------------------------------------------------------- deg8

def _inv8(request: Request) -> Involution8:
    return Involution8.parse(request.field, request.payload)


def deg8_decompose(request: Request) -> Dict[str, Any]:
    inv = _inv8(request)
    if "d" in request.payload:
        dec = quadsplit8_converse(inv, request.field.parse(request.payload["d"]))
    else:
        dec = decompose8(inv)
    out = dec.as_dict()
    if dec.group.quaternionic:
        out["quadsplit"] = quadsplit8(dec).as_dict()["splitting"]
    return out


def deg8_triality(request: Request) -> Dict[str, Any]:
    inv = _inv8(request)
    triple = triality_components(decompose8(inv))
    if "plus" in request.payload and "minus" in request.payload:
        plus = Involution8.parse(request.field, request.payload["plus"])
        minus = Involution8.parse(request.field, request.payload["minus"])
        triple = triple.with_carriers(plus, minus)
    out = triple.as_dict()
    if triple.plus_carrier is not None:
        try:
            out["equality"] = triality_e3_equality(triple).as_dict()
        except ConditionEqCViolated as err:
            out["equality"] = {"skipped": err.message}
    return out


def deg8_invariants(request: Request) -> Dict[str, Any]:
    inv = _inv8(request)
    lam = request.field.parse(request.get("lam", "1"))
    return e3_f3_deg8(inv, lam).as_dict()
