"""Finite classical probability spaces and their frame translation.

A space is a list of named outcomes with exact rational masses summing
to 1. Events are set expressions over outcome names: singletons, unions,
intersections and complements.

`translate_space` turns a space into a one-step frame: a fresh initial
state with a single `sample` action whose transitions land, with the
outcome's mass, in a state labeled by that outcome's indicator atom.
Outcomes of mass zero get no state; they are unreachable and no formula
needs to mention them. `translate_event` maps a set expression to the
corresponding formula over the indicator atoms, and `check_adequacy`
verifies exact agreement between event measure and one-step probability
across an enumerated family of events.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .checker import SATISFIED, VIOLATED, CheckReport
from .errors import (
    DuplicateDeclaration,
    ModelError,
    NameClash,
    ParseError,
    ProbabilityRangeError,
    ProbabilitySumError,
    UnknownOutcome,
)
from .evaluator import eval_q
from .model import (
    Model,
    ModelSpec,
    SymbolDecl,
    TransitionDecl,
    ValuationDecl,
    validate_model,
)
from .parser import parse_rational, strip_comment
from .syntax import ACTION, PROP, BOT, Expr, conj, disj, free, neg, sym
from .values import GroundAction, render_rational

SAMPLE = GroundAction("sample", ())
INITIAL = "init"


@dataclass(frozen=True)
class ProbabilitySpace:
    name: str
    outcomes: tuple[str, ...]
    mass: dict[str, Fraction]

    def __hash__(self):
        return hash((self.name, self.outcomes))


def validate_space(space: ProbabilitySpace) -> None:
    if not space.outcomes:
        raise ModelError(f"space {space.name} has no outcomes")
    seen = set()
    for o in space.outcomes:
        if o in seen:
            raise DuplicateDeclaration(f"outcome '{o}' declared twice")
        seen.add(o)
    for o, m in space.mass.items():
        if o not in seen:
            raise UnknownOutcome(f"mass assigned to undeclared outcome '{o}'")
        if not 0 <= m <= 1:
            raise ProbabilityRangeError.mass(space.name, o, m)
    for o in space.outcomes:
        if o not in space.mass:
            raise ModelError(f"outcome '{o}' has no mass assigned")
    total = sum(space.mass.values())
    if total != 1:
        raise ProbabilitySumError.masses(space.name, total)


# ---------- events as set expressions ----------


class SetExpr:
    pass


@dataclass(frozen=True)
class Singleton(SetExpr):
    outcome: str


@dataclass(frozen=True)
class Complement(SetExpr):
    inner: SetExpr


@dataclass(frozen=True)
class Union(SetExpr):
    left: SetExpr
    right: SetExpr


@dataclass(frozen=True)
class Intersection(SetExpr):
    left: SetExpr
    right: SetExpr


def denote(space: ProbabilitySpace, event: SetExpr) -> frozenset[str]:
    """The subset of outcomes an event stands for."""
    match event:
        case Singleton(o):
            if o not in space.outcomes:
                raise UnknownOutcome(f"'{o}' is not an outcome of {space.name}")
            return frozenset({o})
        case Complement(inner):
            return frozenset(space.outcomes) - denote(space, inner)
        case Union(left, right):
            return denote(space, left) | denote(space, right)
        case Intersection(left, right):
            return denote(space, left) & denote(space, right)
    raise ModelError(f"unknown event form {event!r}")


def measure(space: ProbabilitySpace, event: SetExpr) -> Fraction:
    return sum((space.mass[o] for o in denote(space, event)), Fraction(0))


def render_set_expr(event: SetExpr) -> str:
    def go(e: SetExpr, level: int) -> str:
        match e:
            case Singleton(o):
                return "{" + o + "}"
            case Complement(inner):
                return "~" + go(inner, 2)
            case Intersection(left, right):
                text = f"{go(left, 1)} & {go(right, 2)}"
                return f"({text})" if level > 1 else text
            case Union(left, right):
                text = f"{go(left, 0)} | {go(right, 1)}"
                return f"({text})" if level > 0 else text
        raise ModelError(f"unknown event form {e!r}")

    return go(event, 0)


def parse_set_expr(text: str) -> SetExpr:
    """`{a}` singleton, `~E` complement, `E & E` intersection, `E | E`
    union; `&` binds tighter than `|`, `~` tightest."""
    tokens = _set_tokens(text)
    pos = 0

    def peek() -> str | None:
        return tokens[pos] if pos < len(tokens) else None

    def take(expected: str | None = None) -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError(f"unexpected end of event expression '{text}'")
        tok = tokens[pos]
        if expected is not None and tok != expected:
            raise ParseError(f"expected '{expected}', found '{tok}' in '{text}'")
        pos += 1
        return tok

    def union() -> SetExpr:
        e = inter()
        while peek() == "|":
            take()
            e = Union(e, inter())
        return e

    def inter() -> SetExpr:
        e = prefix()
        while peek() == "&":
            take()
            e = Intersection(e, prefix())
        return e

    def prefix() -> SetExpr:
        if peek() == "~":
            take()
            return Complement(prefix())
        if peek() == "{":
            take()
            name = take()
            if not name.isidentifier():
                raise ParseError(f"expected an outcome name, found '{name}'")
            take("}")
            return Singleton(name)
        if peek() == "(":
            take()
            e = union()
            take(")")
            return e
        raise ParseError(f"unexpected '{peek()}' in event expression '{text}'")

    e = union()
    if pos != len(tokens):
        raise ParseError(f"trailing '{tokens[pos]}' in event expression '{text}'")
    return e


def _set_tokens(text: str) -> list[str]:
    out: list[str] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "{}~|&()":
            out.append(c)
            i += 1
        elif c.isalpha() or c == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(text[i:j])
            i = j
        else:
            raise ParseError(f"bad character '{c}' in event expression '{text}'")
    if not out:
        raise ParseError("empty event expression")
    return out


# ---------- space files ----------


def parse_space(text: str, source: str = "<space>") -> ProbabilitySpace:
    """Read the line format::

        space die
        outcomes: one two three
        mass: one 1/2
        mass: two 1/3
        mass: three 1/6
    """
    name: str | None = None
    outcomes: list[str] = []
    mass: dict[str, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = strip_comment(raw).strip()
        if not line:
            continue

        def fail(msg: str):
            return ParseError(f"{source}:{lineno}: {msg}")

        if line.startswith("space"):
            parts = line.split()
            if len(parts) != 2 or name is not None:
                raise fail("expected a single 'space <name>' line")
            name = parts[1]
        elif line.startswith("outcomes:"):
            for o in line[len("outcomes:"):].split():
                if not o.isidentifier():
                    raise fail(f"outcome '{o}' is not an identifier")
                outcomes.append(o)
        elif line.startswith("mass:"):
            parts = line[len("mass:"):].split()
            if len(parts) != 2:
                raise fail("expected 'mass: <outcome> <rational>'")
            o, m = parts
            if o in mass:
                raise fail(f"mass for '{o}' given twice")
            mass[o] = parse_rational(m)
        else:
            raise fail(f"unrecognized line '{line}'")
    if name is None:
        raise ParseError(f"{source}: missing 'space <name>' line")
    return ProbabilitySpace(name, tuple(outcomes), mass)


def serialize_space(space: ProbabilitySpace) -> str:
    lines = [f"space {space.name}", "outcomes: " + " ".join(space.outcomes)]
    lines += [
        f"mass: {o} {render_rational(space.mass[o])}" for o in space.outcomes
    ]
    return "\n".join(lines) + "\n"


# ---------- translation ----------


def indicator_name(outcome: str) -> str:
    return f"F_{outcome}"


def support(space: ProbabilitySpace) -> list[str]:
    return [o for o in space.outcomes if space.mass[o] > 0]


def translate_space(space: ProbabilitySpace, name: str | None = None) -> Model:
    """Build the one-step frame of a space. Raises NameClash when outcome
    names collide with the generated state, action or indicator names."""
    validate_space(space)
    positive = support(space)
    reserved = {INITIAL, SAMPLE.head} | {indicator_name(o) for o in positive}
    for o in space.outcomes:
        if o in reserved:
            raise NameClash(
                f"outcome '{o}' collides with a generated name of the translation"
            )
    spec = ModelSpec(
        name=name or space.name,
        symbols=[SymbolDecl(indicator_name(o), PROP) for o in positive],
        states=[INITIAL] + positive,
        initial=INITIAL,
        actions=[SymbolDecl(SAMPLE.head, ACTION)],
        transitions=[
            TransitionDecl(INITIAL, SAMPLE.head, (), o, space.mass[o])
            for o in positive
        ],
        valuation=[ValuationDecl(o, indicator_name(o), ()) for o in positive],
    )
    return validate_model(spec)


def translate_event(space: ProbabilitySpace, event: SetExpr) -> Expr:
    """The formula that holds exactly at the states of the event's
    positive-mass outcomes. Zero-mass singletons become falsum: no state
    carries their indicator, so the measure stays untouched."""
    match event:
        case Singleton(o):
            if o not in space.outcomes:
                raise UnknownOutcome(f"'{o}' is not an outcome of {space.name}")
            if space.mass[o] == 0:
                return sym(BOT)
            return free(indicator_name(o))
        case Complement(inner):
            return neg(translate_event(space, inner))
        case Union(left, right):
            return disj(translate_event(space, left), translate_event(space, right))
        case Intersection(left, right):
            return conj(translate_event(space, left), translate_event(space, right))
    raise ModelError(f"unknown event form {event!r}")


def event_probability(space: ProbabilitySpace, event: SetExpr, model: Model | None = None) -> Fraction:
    """One-step probability of the translated event in the translated frame."""
    if model is None:
        model = translate_space(space)
    return eval_q(model, INITIAL, [SAMPLE], translate_event(space, event))


def enumerate_events(
    space: ProbabilitySpace, depth: int = 2, max_events: int = 512
) -> list[SetExpr]:
    """Set expressions over the space, one per distinct denotation.

    Starts from the singletons and closes under complement, union and
    intersection for `depth` rounds, keeping only expressions whose
    denotation is new. Small spaces reach the full event algebra."""
    events: dict[frozenset[str], SetExpr] = {}
    for o in space.outcomes:
        e = Singleton(o)
        events.setdefault(denote(space, e), e)
    for _ in range(depth):
        if len(events) >= max_events:
            break
        current = list(events.values())
        for e in current:
            events.setdefault(denote(space, Complement(e)), Complement(e))
        for a in current:
            if len(events) >= max_events:
                break
            for b in current:
                events.setdefault(denote(space, Union(a, b)), Union(a, b))
                events.setdefault(denote(space, Intersection(a, b)), Intersection(a, b))
    return list(events.values())[:max_events]


def check_adequacy(
    space: ProbabilitySpace, depth: int = 2, max_events: int = 512
) -> CheckReport:
    """Measure each enumerated event both ways and compare exactly."""
    model = translate_space(space)
    checked = 0
    for event in enumerate_events(space, depth, max_events):
        m = measure(space, event)
        q = event_probability(space, event, model)
        checked += 1
        if m != q:
            return CheckReport(
                VIOLATED,
                witness={
                    "event": render_set_expr(event),
                    "measure": render_rational(m),
                    "probability": render_rational(q),
                },
                numeric=q,
                details={"events_checked": checked},
            )
    return CheckReport(
        SATISFIED,
        details={
            "events_checked": checked,
            "outcomes": len(space.outcomes),
            "support": len(support(space)),
        },
    )
