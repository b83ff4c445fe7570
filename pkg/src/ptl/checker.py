"""Satisfaction checking, entailment over model families, and the
independence operations.

Reports are plain data: verdict plus an optional witness (for violations, a
trail of the choices that lead to a failing subformula), an optional exact
rational for numeric queries, warnings, and free-form details. Reports
serialize to JSON with rationals as "p/q" strings and parse back losslessly.

Entailment here is relative to a supplied family of models, not to all
models of the signature; the CLI says so in its output header.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import LengthMismatch, PtlError
from .evaluator import (
    _ground_action,
    describe,
    eval_q,
    eval_q_trace,
    evaluate,
    truth,
)
from .model import Model, successors
from .syntax import App, Box, Expr, Lam, QTrace, Sym, Symbol, conj
from .values import BoolV, GroundAction, RatV, StateV, render_rational, render_value

SATISFIED = "satisfied"
VIOLATED = "violated"
ERROR = "error"


@dataclass
class CheckReport:
    verdict: str
    witness: dict | None = None
    numeric: Fraction | None = None
    warnings: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    message: str | None = None

    @property
    def ok(self) -> bool:
        return self.verdict == SATISFIED

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": self.witness,
            "numeric": None if self.numeric is None else render_rational(self.numeric),
            "warnings": list(self.warnings),
            "details": dict(self.details),
            "message": self.message,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CheckReport":
        numeric = data.get("numeric")
        return cls(
            verdict=data["verdict"],
            witness=data.get("witness"),
            numeric=None if numeric is None else Fraction(numeric),
            warnings=list(data.get("warnings", [])),
            details=dict(data.get("details", {})),
            message=data.get("message"),
        )


@dataclass
class Theory:
    """A named set of axioms closed over a model signature."""

    name: str
    axioms: dict[str, Expr]


def _error_report(exc: PtlError) -> CheckReport:
    return CheckReport(ERROR, message=str(exc))


# ---------- local and global satisfaction ----------


def satisfies(model: Model, state: str, formula: Expr) -> CheckReport:
    """Truth of a formula at one state. Numeric comparisons get the value
    of their probability side recorded; violations get a witness trail."""
    try:
        value = evaluate(model, state, formula)
    except PtlError as exc:
        return _error_report(exc)
    if isinstance(value, RatV):
        return CheckReport(SATISFIED, numeric=value.value,
                           details={"kind": "numeric", "value": render_rational(value.value)})
    if not isinstance(value, BoolV):
        return CheckReport(ERROR, message=f"formula evaluated to {render_value(value)}")
    report = CheckReport(SATISFIED if value.value else VIOLATED)
    _attach_numeric(report, model, state, formula)
    if not value.value:
        trail = _drill(model, state, formula, {})
        report.witness = {"state": _trail_state(trail, state), "trail": trail}
    return report


def globally_satisfies(model: Model, formula: Expr) -> CheckReport:
    """Truth at every state, in declaration order; the first violating
    state is reported."""
    for state in model.states:
        report = satisfies(model, state, formula)
        if report.verdict == ERROR:
            report.message = f"at state {state}: {report.message}"
            return report
        if report.verdict == VIOLATED:
            report.details["violating_state"] = state
            return report
    return CheckReport(SATISFIED, details={"states_checked": len(model.states)})


def _attach_numeric(report: CheckReport, model: Model, state: str, formula: Expr) -> None:
    match formula:
        case App(App(Sym(Symbol(("=" | "<"), _, "rel")), lhs), rhs):
            try:
                lv = evaluate(model, state, lhs)
                rv = evaluate(model, state, rhs)
            except PtlError:
                return
            if isinstance(lv, RatV) and isinstance(rv, RatV):
                report.details["lhs"] = render_rational(lv.value)
                report.details["rhs"] = render_rational(rv.value)
                side = lv if _mentions_q(lhs) or not _mentions_q(rhs) else rv
                report.numeric = side.value


def _mentions_q(e: Expr) -> bool:
    match e:
        case QTrace():
            return True
        case Sym(Symbol(_, _, "prob")):
            return True
        case App(fn, arg):
            return _mentions_q(fn) or _mentions_q(arg)
        case Lam(_, body):
            return _mentions_q(body)
        case Box(_, body):
            return _mentions_q(body)
        case _:
            return False


def _trail_state(trail: list[dict], default: str) -> str:
    state = default
    for step in trail:
        state = step.get("state", state)
    return state


def _drill(model: Model, state: str, expr: Expr, env: dict) -> list[dict]:
    """Walk a violated formula toward a concrete failing point, recording
    the states and instantiations chosen along the way."""
    match expr:
        case Box(action_e, body):
            ga = _ground_action(model, state, action_e, env)
            for w, _ in model.frame.successors(state, ga):
                if not truth(model, w, body, env):
                    step = {"step": "box", "action": str(ga), "state": w}
                    return [step] + _drill(model, w, body, env)
        case App(App(Sym(Symbol("@", _, "hybrid")), state_e), body):
            v = evaluate(model, state, state_e, env)
            if isinstance(v, StateV) and not truth(model, v.name, body, env):
                step = {"step": "at", "state": v.name}
                return [step] + _drill(model, v.name, body, env)
        case App(Sym(Symbol("forall", _, "quant")), Lam(param, body)):
            from .evaluator import _domain  # shared domain enumeration

            for v in _domain(model, param.type):
                inner = dict(env)
                inner[param.name] = v
                if not truth(model, state, body, inner):
                    step = {
                        "step": "instantiate",
                        "var": param.name,
                        "value": render_value(v),
                    }
                    return [step] + _drill(model, state, body, inner)
        case App(App(Sym(Symbol("/\\", _, "logical")), left), right):
            if not truth(model, state, left, env):
                return _drill(model, state, left, env)
            return _drill(model, state, right, env)
        case App(App(Sym(Symbol("->", _, "logical")), left), right):
            if truth(model, state, left, env):
                return _drill(model, state, right, env)
    return [{"step": "fails", "state": state, "formula": describe(expr)}]


# ---------- entailment over a model family ----------


def entails(
    models: list[Model], theory: Theory, conclusion: Expr
) -> CheckReport:
    """Does every supplied model that globally satisfies the theory also
    globally satisfy the conclusion? Vacuous when no model qualifies."""
    satisfying = 0
    for model in models:
        holds = True
        for name, axiom in theory.axioms.items():
            report = globally_satisfies(model, axiom)
            if report.verdict == ERROR:
                report.message = (
                    f"model {model.name}, axiom {name}: {report.message}"
                )
                return report
            if report.verdict == VIOLATED:
                holds = False
                break
        if not holds:
            continue
        satisfying += 1
        report = globally_satisfies(model, conclusion)
        if report.verdict == ERROR:
            report.message = f"model {model.name}, conclusion: {report.message}"
            return report
        if report.verdict == VIOLATED:
            report.details["model"] = model.name
            report.details["models_checked"] = len(models)
            return report
    out = CheckReport(
        SATISFIED,
        details={"models_checked": len(models), "models_satisfying_theory": satisfying},
    )
    if satisfying == 0:
        out.warnings.append(
            "vacuous entailment: no supplied model satisfies the theory"
        )
    return out


# ---------- independence ----------


def check_independent(
    model: Model,
    a: GroundAction,
    b: GroundAction,
    props: list[Expr] | None = None,
) -> CheckReport:
    """Is the probability of each proposition under action a unchanged by
    first taking action b, at every state? This is the finite-family
    approximation of quantifying over all propositions; by default the
    family is every ground atom of the model."""
    if props is None:
        props = model.ground_atoms()
    try:
        for state in model.states:
            for prop in props:
                before = eval_q(model, state, [a], prop)
                for succ, _ in successors(model, state, b):
                    after = eval_q(model, succ, [a], prop)
                    if after != before:
                        return CheckReport(
                            VIOLATED,
                            witness={
                                "state": succ,
                                "trail": [
                                    {"step": "box", "action": str(b), "state": succ},
                                    {
                                        "step": "fails",
                                        "state": succ,
                                        "formula": f"Q[{a}]({describe(prop)}) = {render_rational(before)}",
                                    },
                                ],
                                "from_state": state,
                                "prop": describe(prop),
                            },
                            numeric=after,
                            details={
                                "expected": render_rational(before),
                                "actual": render_rational(after),
                            },
                        )
    except PtlError as exc:
        return _error_report(exc)
    return CheckReport(
        SATISFIED, details={"states_checked": len(model.states), "props": len(props)}
    )


def check_shortcut(
    model: Model,
    actions: list[GroundAction],
    props: list[Expr],
    state: str | None = None,
) -> CheckReport:
    """Compare a trace probability against the product of its per-step
    probabilities. With one action and several propositions the left side
    is the probability of their conjunction after that single action; the
    product is then unjustified by independence and gets a warning, since
    equality there is coincidence, not a theorem."""
    if state is None:
        state = model.initial or model.states[0]
    warnings: list[str] = []
    try:
        if len(actions) == len(props):
            lhs = eval_q_trace(model, state, list(actions), list(props))
            factors = [eval_q(model, state, [a], p) for a, p in zip(actions, props)]
        elif len(actions) == 1:
            lhs = eval_q(model, state, list(actions), conj(*props))
            factors = [eval_q(model, state, list(actions), p) for p in props]
            warnings.append(
                "propositions share a single action occurrence; "
                "the independence shortcut does not apply, equality is coincidental"
            )
        else:
            raise LengthMismatch(
                f"{len(actions)} actions cannot pair with {len(props)} propositions"
            )
    except LengthMismatch:
        raise
    except PtlError as exc:
        return _error_report(exc)
    rhs = Fraction(1)
    for f in factors:
        rhs *= f
    verdict = SATISFIED if lhs == rhs else VIOLATED
    return CheckReport(
        verdict,
        numeric=lhs,
        warnings=warnings,
        details={
            "state": state,
            "trace": render_rational(lhs),
            "product": render_rational(rhs),
            "factors": [render_rational(f) for f in factors],
        },
    )
