"""Types, symbols and the term language.

The type grammar has four base types (bool, obj, num, state) plus arrow and
list constructors. Propositions and actions are plain abbreviations:

    prop   = state -> bool
    action = state -> [state]

Both are canonicalized structurally; no distinct "prop" node is ever stored,
so type equality is ordinary structural equality.

Terms are a simply typed lambda calculus extended with modal nodes (box,
diamond, probability-annotated diamond) and a trace-probability node. Sugared
binder forms produced by the parser (predicate bounds, list-membership
bounds) are expanded by `desugar` before typechecking or evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import SourceSpan

# ---------- types ----------


class Type:
    __slots__ = ()


@dataclass(frozen=True)
class Base(Type):
    kind: str  # one of: bool, obj, num, state

    def __str__(self) -> str:
        return self.kind


@dataclass(frozen=True)
class Arrow(Type):
    """Function type: src -> dst."""

    src: Type
    dst: Type

    def __str__(self) -> str:
        if self == PROP:
            return "prop"
        if self == ACTION:
            return "action"
        left = f"({self.src})" if isinstance(self.src, Arrow) else str(self.src)
        return f"{left} -> {self.dst}"


@dataclass(frozen=True)
class ListT(Type):
    """List type: [elem]."""

    elem: Type

    def __str__(self) -> str:
        return f"[{self.elem}]"


BOOL = Base("bool")
OBJ = Base("obj")
NUM = Base("num")
STATE = Base("state")
PROP = Arrow(STATE, BOOL)
ACTION = Arrow(STATE, ListT(STATE))

BASE_TYPES = {"bool": BOOL, "obj": OBJ, "num": NUM, "state": STATE,
              "prop": PROP, "action": ACTION}

# Quantifiers can only be evaluated by exhausting the domain of the bound
# variable, so only finitely enumerable base types are admitted.
ENUMERABLE = (BOOL, OBJ, STATE)


def is_atom_signature(ty: Type) -> bool:
    """Atoms are flexible symbols: zero or more obj/num arguments into prop."""
    while isinstance(ty, Arrow) and ty != PROP:
        if ty.src not in (OBJ, NUM):
            return False
        ty = ty.dst
    return ty == PROP


def atom_arg_types(ty: Type) -> tuple[Type, ...]:
    args: list[Type] = []
    while ty != PROP:
        assert isinstance(ty, Arrow)
        args.append(ty.src)
        ty = ty.dst
    return tuple(args)


def action_arity(ty: Type) -> int | None:
    """Number of obj arguments of an action signature, or None if the type
    is not an action signature."""
    n = 0
    while isinstance(ty, Arrow) and ty != ACTION:
        if ty.src != OBJ:
            return None
        ty = ty.dst
        n += 1
    return n if ty == ACTION else None


# ---------- symbols ----------


@dataclass(frozen=True)
class Symbol:
    """A named constant or variable occurrence.

    kind is one of: var (bound variable), free (resolved against a model's
    type environment), logical, rel, arith, list, hybrid, prob, quant.
    Polymorphic builtins carry type None; their instance type is determined
    at each use site.
    """

    name: str
    type: Type | None = None
    kind: str = "free"


TOP = Symbol("true", PROP, "logical")
BOT = Symbol("false", PROP, "logical")
NOT = Symbol("~", Arrow(PROP, PROP), "logical")
AND = Symbol("/\\", Arrow(PROP, Arrow(PROP, PROP)), "logical")
OR = Symbol("\\/", Arrow(PROP, Arrow(PROP, PROP)), "logical")
IMP = Symbol("->", Arrow(PROP, Arrow(PROP, PROP)), "logical")
IFF = Symbol("<->", Arrow(PROP, Arrow(PROP, PROP)), "logical")
EQ = Symbol("=", None, "rel")  # tau -> tau -> prop
LT = Symbol("<", Arrow(NUM, Arrow(NUM, PROP)), "rel")
PLUS = Symbol("+", Arrow(NUM, Arrow(NUM, NUM)), "arith")
TIMES = Symbol("*", Arrow(NUM, Arrow(NUM, NUM)), "arith")
DIV = Symbol("/", Arrow(NUM, Arrow(NUM, NUM)), "arith")
NIL = Symbol("nil", None, "list")  # [tau]
CONS = Symbol("::", None, "list")  # tau -> [tau] -> [tau]
MEMBER = Symbol("in", None, "list")  # tau -> [tau] -> prop
LENGTH = Symbol("|.|", None, "list")  # [tau] -> num
DIFF = Symbol("-", None, "list")  # [tau] -> tau -> [tau]
AT = Symbol("@", Arrow(STATE, Arrow(PROP, PROP)), "hybrid")
IN_STATE = Symbol("in", Arrow(STATE, PROP), "hybrid")
QSYM = Symbol("Q", Arrow(ListT(ACTION), Arrow(PROP, NUM)), "prob")
FORALL = Symbol("forall", None, "quant")  # (tau -> prop) -> prop
EXISTS = Symbol("exists", None, "quant")


# ---------- terms ----------


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Sym(Expr):
    symbol: Symbol
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class RatLit(Expr):
    """Exact rational literal, kept in lowest terms by Fraction."""

    value: Fraction
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator


@dataclass(frozen=True)
class App(Expr):
    fn: Expr
    arg: Expr
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Lam(Expr):
    """Typed abstraction; the binder always carries its type."""

    param: Symbol
    body: Expr
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Box(Expr):
    """All successors under the action satisfy the body (vacuously true
    when the action is disabled)."""

    action: Expr
    body: Expr
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Diamond(Expr):
    """Some successor under the action satisfies the body."""

    action: Expr
    body: Expr
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class DiamondAnn(Expr):
    """Some successor reached with exactly the annotated probability
    satisfies the body."""

    action: Expr
    prob: Expr
    body: Expr
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class QTrace(Expr):
    """Trace probability: the chance that each proposition holds right
    after its action, along the action list. Type num."""

    actions: tuple[Expr, ...]
    props: tuple[Expr, ...]
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


# Sugared binder forms; only the parser builds these, desugar removes them.


@dataclass(frozen=True)
class PredBinder(Expr):
    """forall x : P . body with P a unary predicate over objects."""

    quant: str  # forall | exists
    var: str
    pred: str
    body: Expr
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class MemberBinder(Expr):
    """forall x in L . body with L a list of objects."""

    quant: str
    var: str
    bound: Expr
    body: Expr
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


# ---------- construction helpers ----------


def rat(n: int | Fraction, d: int = 1) -> RatLit:
    return RatLit(Fraction(n, d))


def app(fn: Expr, *args: Expr) -> Expr:
    out = fn
    for a in args:
        out = App(out, a)
    return out


def sym(s: Symbol) -> Sym:
    return Sym(s)


def var(name: str, ty: Type) -> Sym:
    return Sym(Symbol(name, ty, "var"))


def free(name: str) -> Sym:
    return Sym(Symbol(name, None, "free"))


def neg(e: Expr) -> Expr:
    return App(Sym(NOT), e)


def conj(*es: Expr) -> Expr:
    out = es[-1]
    for e in reversed(es[:-1]):
        out = app(Sym(AND), e, out)
    return out


def disj(*es: Expr) -> Expr:
    out = es[-1]
    for e in reversed(es[:-1]):
        out = app(Sym(OR), e, out)
    return out


def imp(a: Expr, b: Expr) -> Expr:
    return app(Sym(IMP), a, b)


def eq(a: Expr, b: Expr) -> Expr:
    return app(Sym(EQ), a, b)


def lt(a: Expr, b: Expr) -> Expr:
    return app(Sym(LT), a, b)


def quant(q: str, name: str, ty: Type, body: Expr) -> Expr:
    head = FORALL if q == "forall" else EXISTS
    return App(Sym(head), Lam(Symbol(name, ty, "var"), body))


def cons_list(items: list[Expr]) -> Expr:
    out: Expr = Sym(NIL)
    for item in reversed(items):
        out = app(Sym(CONS), item, out)
    return out


def uncons_list(e: Expr) -> list[Expr] | None:
    """Inverse of cons_list; None when e is not a literal cons chain."""
    items: list[Expr] = []
    while True:
        match e:
            case Sym(Symbol("nil", _, "list")):
                return items
            case App(App(Sym(Symbol("::", _, "list")), head), tail):
                items.append(head)
                e = tail
            case _:
                return None


def spine(e: Expr) -> tuple[Expr, list[Expr]]:
    """Decompose nested applications into head and argument list."""
    args: list[Expr] = []
    while isinstance(e, App):
        args.append(e.arg)
        e = e.fn
    args.reverse()
    return e, args


# ---------- desugaring ----------


def desugar(e: Expr) -> Expr:
    """Expand sugared binders; idempotent on core terms.

    forall x : P . H  becomes  forall x : obj . P(x) -> H
    exists x : P . H  becomes  exists x : obj . P(x) /\\ H
    and the list-membership bounds expand the same way with an `x in L`
    guard. Bound variables introduced by sugar are typed obj.
    """
    match e:
        case Sym() | RatLit():
            return e
        case App(fn, arg):
            return App(desugar(fn), desugar(arg), span=e.span)
        case Lam(param, body):
            return Lam(param, desugar(body), span=e.span)
        case Box(action, body):
            return Box(desugar(action), desugar(body), span=e.span)
        case Diamond(action, body):
            return Diamond(desugar(action), desugar(body), span=e.span)
        case DiamondAnn(action, prob, body):
            return DiamondAnn(desugar(action), desugar(prob), desugar(body), span=e.span)
        case QTrace(actions, props):
            return QTrace(
                tuple(desugar(a) for a in actions),
                tuple(desugar(p) for p in props),
                span=e.span,
            )
        case PredBinder(q, x, pred, body):
            guard = App(free(pred), var(x, OBJ))
            return quant(q, x, OBJ, _guarded(q, guard, desugar(body)))
        case MemberBinder(q, x, bound, body):
            guard = app(Sym(MEMBER), var(x, OBJ), desugar(bound))
            return quant(q, x, OBJ, _guarded(q, guard, desugar(body)))
    raise TypeError(f"not an expression: {e!r}")


def _guarded(q: str, guard: Expr, body: Expr) -> Expr:
    if q == "forall":
        return imp(guard, body)
    return conj(guard, body)


# ---------- alpha equivalence ----------


def alpha_eq(a: Expr, b: Expr) -> bool:
    """Structural equality up to renaming of bound variables."""
    return _alpha(a, b, {}, {}, 0)


def _alpha(a: Expr, b: Expr, la: dict[str, int], lb: dict[str, int], depth: int) -> bool:
    match a, b:
        case Sym(sa), Sym(sb):
            if sa.name in la or sb.name in lb:
                return la.get(sa.name) == lb.get(sb.name)
            return sa == sb
        case RatLit(va), RatLit(vb):
            return va == vb
        case App(fa, aa), App(fb, ab):
            return _alpha(fa, fb, la, lb, depth) and _alpha(aa, ab, la, lb, depth)
        case Lam(pa, ba), Lam(pb, bb):
            if pa.type != pb.type:
                return False
            return _alpha(
                ba, bb, {**la, pa.name: depth}, {**lb, pb.name: depth}, depth + 1
            )
        case Box(xa, ba), Box(xb, bb):
            return _alpha(xa, xb, la, lb, depth) and _alpha(ba, bb, la, lb, depth)
        case Diamond(xa, ba), Diamond(xb, bb):
            return _alpha(xa, xb, la, lb, depth) and _alpha(ba, bb, la, lb, depth)
        case DiamondAnn(xa, pa, ba), DiamondAnn(xb, pb, bb):
            return (
                _alpha(xa, xb, la, lb, depth)
                and _alpha(pa, pb, la, lb, depth)
                and _alpha(ba, bb, la, lb, depth)
            )
        case QTrace(aa, pa), QTrace(ab, pb):
            return (
                len(aa) == len(ab)
                and len(pa) == len(pb)
                and all(_alpha(x, y, la, lb, depth) for x, y in zip(aa, ab))
                and all(_alpha(x, y, la, lb, depth) for x, y in zip(pa, pb))
            )
        case _:
            return False


def free_names(e: Expr, bound: frozenset[str] = frozenset()) -> set[str]:
    """Names of free (non-builtin) symbol occurrences."""
    match e:
        case Sym(s):
            if s.kind in ("free", "var") and s.name not in bound:
                return {s.name}
            return set()
        case RatLit():
            return set()
        case App(fn, arg):
            return free_names(fn, bound) | free_names(arg, bound)
        case Lam(param, body):
            return free_names(body, bound | {param.name})
        case Box(action, body) | Diamond(action, body):
            return free_names(action, bound) | free_names(body, bound)
        case DiamondAnn(action, prob, body):
            return (
                free_names(action, bound)
                | free_names(prob, bound)
                | free_names(body, bound)
            )
        case QTrace(actions, props):
            out: set[str] = set()
            for x in actions + props:
                out |= free_names(x, bound)
            return out
        case PredBinder(_, x, pred, body):
            return {pred} | free_names(body, bound | {x})
        case MemberBinder(_, x, bnd, body):
            return free_names(bnd, bound) | free_names(body, bound | {x})
    raise TypeError(f"not an expression: {e!r}")
