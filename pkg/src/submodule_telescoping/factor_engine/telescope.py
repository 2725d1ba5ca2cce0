"""
The submodule telescoping pipeline: L = L_left * R where R maps m = H into the
polynomial submodule N and L_left annihilates R(m) inside N, one component at a time.
"""
from dataclasses import dataclass
from dataclasses import field

from submodule_telescoping.exact_algebra.polynomials import RFuncNK
from submodule_telescoping.factor_engine.automorphisms import Component
from submodule_telescoping.factor_engine.automorphisms import decompose
from submodule_telescoping.factor_engine.automorphisms import detect_automorphisms
from submodule_telescoping.factor_engine.krylov import krylov_annihilator
from submodule_telescoping.factor_engine.pipeline import Pipeline
from submodule_telescoping.factor_engine.pipeline import Stage
from submodule_telescoping.factor_engine.right_factor import RightFactorResult
from submodule_telescoping.factor_engine.right_factor import right_factor
from submodule_telescoping.hyperterm.term import HTerm
from submodule_telescoping.hyperterm.term import TermSpec
from submodule_telescoping.hyperterm.term import ap_shift_reduce
from submodule_telescoping.hyperterm.term import certificates
from submodule_telescoping.ore_ops.operator import OreOp
from submodule_telescoping.ore_ops.operator import lclm
from submodule_telescoping.ore_ops.text import print_op
from submodule_telescoping.reduction.context import ReductionContext
from submodule_telescoping.utils.logging import log


@dataclass(frozen=True)
class TelescopeOptions:
    """
    Attributes:
        degree_cap (int | None): Cap for relation generation and the right-factor
            order; None picks the default from the term.
        use_symmetry (bool): Decompose N with the detected automorphisms.
        expanded (bool): Also multiply out L_left * R.
        track_cert (bool): Carry the reduction certificate of R(m).
        verbose (int): Verbosity of the diagnostics on standard error.
    """

    degree_cap: int | None = None
    use_symmetry: bool = True
    expanded: bool = False
    track_cert: bool = False
    verbose: int = 0


def _size(op: OreOp) -> int:
    return len(print_op(op).encode("utf-8"))


@dataclass
class TelescoperResult:
    """
    The factored telescoper of a term.

    Attributes:
        R (OreOp): The right factor.
        components (list[Component]): Components with nonzero target and their L's.
        dropped (list[Component]): Components whose projected target vanishes.
        L_left (OreOp): lclm of the component annihilators.
        L_min (OreOp): lclm of the annihilators of the non-zero-sum components, times R.
        L_expanded (OreOp | None): L_left * R, when requested.
        dim (int): Dimension D of N.
        automorphisms (list[str]): Names of the automorphisms used.
        right (RightFactorResult): Details of the right factor.
        h0 (HTerm): The shift-reduced kernel.
        r0 (RFuncNK): The rational factor with H = R0 * H0.
        context (ReductionContext): Reduction data of H0.
        timings (dict[str, float]): Wall time per pipeline stage.
    """

    R: OreOp
    components: list
    dropped: list
    L_left: OreOp
    L_min: OreOp
    L_expanded: OreOp | None
    dim: int
    automorphisms: list
    right: RightFactorResult
    h0: HTerm
    r0: RFuncNK
    context: ReductionContext
    timings: dict = field(default_factory=dict)

    @property
    def telescoper_order(self) -> int:
        return self.L_left.order + self.R.order

    def expand(self) -> OreOp:
        if self.L_expanded is None:
            self.L_expanded = (self.L_left * self.R).normalized()
        return self.L_expanded

    @property
    def sizes(self) -> dict:
        """Byte sizes of the canonical text of the factored and expanded telescopers."""
        factored = _size(self.R) + sum(_size(c.L) for c in self.components)
        expanded = None if self.L_expanded is None else _size(self.L_expanded)
        ratio = None if expanded is None else expanded / factored
        return {"factored_bytes": factored, "expanded_bytes": expanded, "ratio": ratio}

    def to_json(self) -> dict:
        data = {
            "R": print_op(self.R),
            "dim": self.dim,
            "automorphisms": list(self.automorphisms),
            "components": [
                {
                    "labels": list(c.labels),
                    "dim": c.dim,
                    "order": c.L.order,
                    "zero_sum": c.zero_sum,
                    "L": print_op(c.L),
                }
                for c in self.components
            ],
            "dropped": [{"labels": list(c.labels), "dim": c.dim} for c in self.dropped],
            "L_left": print_op(self.L_left),
            "L_min": print_op(self.L_min),
            "orders": {
                "R": self.R.order,
                "L_left": self.L_left.order,
                "telescoper": self.telescoper_order,
                "L_min": self.L_min.order,
            },
            "sizes": self.sizes,
            "timings": {name: round(t, 6) for name, t in self.timings.items()},
        }
        if self.L_expanded is not None:
            data["L_expanded"] = print_op(self.L_expanded)
        return data


def telescope(spec: TermSpec, options: TelescopeOptions | None = None) -> TelescoperResult:
    """
    Runs the full pipeline on a term.

    Args:
        spec (TermSpec): The summand H.
        options (TelescopeOptions | None): Pipeline options.

    Returns:
        TelescoperResult: R, the components with their annihilators and the assembled
            telescopers.

    Raises:
        StageError: Wrapping any failure with the name of the stage it happened in.
    """
    options = options or TelescopeOptions()
    verbose = options.verbose

    def shift_reduce(state: dict) -> dict:
        r0, h0 = ap_shift_reduce(state["h"])
        log(f"R0 = {r0}, H0 = {h0.spec}", verbose)
        return {"r0": r0, "h0": h0}

    def reduce_kernel(state: dict) -> dict:
        ctx = ReductionContext(state["h0"], options.degree_cap, verbose)
        return {"ctx": ctx, "A": ctx.sn_matrix()}

    def find_automorphisms(state: dict) -> dict:
        auts = detect_automorphisms(state["h0"]) if options.use_symmetry else []
        log(f"automorphisms: {[str(a.kind) for a in auts]}", verbose)
        return {"auts": auts}

    def split(state: dict) -> dict:
        parts = decompose(state["ctx"], state["auts"], state["right"].target)
        return {
            "components": [c for c in parts if not c.is_dropped],
            "dropped": [c for c in parts if c.is_dropped],
        }

    def annihilate(state: dict) -> dict:
        for component in state["components"]:
            component.L = krylov_annihilator(component.target, state["A"])
            log(f"component {component.labels}: dim {component.dim}, order {component.L.order}", verbose)
        return {}

    def assemble(state: dict) -> dict:
        R = state["right"].R
        ls = [c.L for c in state["components"]]
        left = lclm(ls) if ls else OreOp.scalar(1)
        summing = [c.L for c in state["components"] if not c.zero_sum]
        minimal = ((lclm(summing) * R) if summing else R).normalized()
        expanded = (left * R).normalized() if options.expanded else None
        return {"L_left": left, "L_min": minimal, "L_expanded": expanded}

    with Pipeline(verbose) as pipeline:
        stage_cert = Stage("certificates", lambda state: {"h": certificates(state["spec"])})
        stage_shift = Stage("shift_reduce", shift_reduce)
        stage_reduce = Stage("reduce", reduce_kernel)
        stage_right = Stage(
            "right_factor", lambda state: {"right": right_factor(state["r0"], state["ctx"], options.track_cert)}
        )
        stage_auts = Stage("automorphisms", find_automorphisms)
        stage_split = Stage("decompose", split)
        stage_krylov = Stage("krylov", annihilate)
        stage_assemble = Stage("assemble", assemble)

        stage_cert >> stage_shift >> stage_reduce >> [stage_right, stage_auts]
        [stage_right, stage_auts] >> stage_split >> stage_krylov >> stage_assemble

    state = pipeline.run({"spec": spec})
    ctx = state["ctx"]
    return TelescoperResult(
        R=state["right"].R,
        components=state["components"],
        dropped=state["dropped"],
        L_left=state["L_left"],
        L_min=state["L_min"],
        L_expanded=state["L_expanded"],
        dim=ctx.basis().dim,
        automorphisms=[str(a.kind) for a in state["auts"]],
        right=state["right"],
        h0=state["h0"],
        r0=state["r0"],
        context=ctx,
        timings=dict(pipeline.timings),
    )
