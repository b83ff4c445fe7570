"""Evaluation of well-typed terms against a model and a current state.

Everything is interpreted at the current state: flexible symbols (atoms and
the probability operator) consult it, rigid symbols ignore it, and the modal
nodes plus @ shift it for their bodies. Lambdas capture the state where they
are interpreted, so a function value keeps denoting the same function even
if it flows across a modality.

The probability operator and @ are intensional: their proposition argument
is re-evaluated at other states, so both are handled as special forms on the
application spine and must be fully applied. All arithmetic is exact; no
floats anywhere.

Connectives evaluate both operands (no short-circuiting): a disabled action
inside a probability query is a modeling mistake and should surface as a
DisabledAction error, not be masked by operand order.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    DisabledAction,
    DivisionByZero,
    EvalError,
    LengthMismatch,
    UnboundVariable,
    UnenumerableQuantifier,
)
from .printer import print_formula
from .syntax import (
    BOOL,
    OBJ,
    STATE,
    App,
    Box,
    Diamond,
    DiamondAnn,
    Expr,
    Lam,
    QTrace,
    RatLit,
    Sym,
    Symbol,
    Type,
)
from .values import (
    FALSE,
    TRUE,
    ActionV,
    BoolV,
    ClosureV,
    GroundAction,
    ListV,
    NativeV,
    ObjV,
    RatV,
    StateV,
    Value,
    atom_arg_key,
    render_value,
    values_equal,
)
from .model import Model

Env = dict[str, Value]


def evaluate(model: Model, state: str, expr: Expr, env: Env | None = None) -> Value:
    """Interpret a desugared, well-typed expression at a state."""
    if env is None:
        env = {}
    match expr:
        case RatLit(v):
            return RatV(v)
        case Sym(s):
            return _symbol_value(model, state, s, env, expr)
        case Lam(param, body):
            return ClosureV(param, body, dict(env), state)
        case Box(action_e, body):
            ga = _ground_action(model, state, action_e, env)
            succ = model.frame.successors(state, ga)
            return BoolV(all(_truth(model, w, body, env) for w, _ in succ))
        case Diamond(action_e, body):
            ga = _ground_action(model, state, action_e, env)
            succ = model.frame.successors(state, ga)
            return BoolV(any(_truth(model, w, body, env) for w, _ in succ))
        case DiamondAnn(action_e, prob_e, body):
            ga = _ground_action(model, state, action_e, env)
            p = _rational(model, state, prob_e, env)
            succ = model.frame.successors(state, ga)
            return BoolV(
                any(rho == p and _truth(model, w, body, env) for w, rho in succ)
            )
        case QTrace(actions, props):
            return RatV(eval_q_trace(model, state, list(actions), list(props), env))
        case App():
            return _apply_expr(model, state, expr, env)
    raise EvalError(f"cannot evaluate {type(expr).__name__}; desugar first")


def _apply_expr(model: Model, state: str, expr: App, env: Env) -> Value:
    # intensional special forms first: their proposition argument is
    # evaluated at other states, not here
    match expr:
        case App(App(Sym(Symbol("Q", _, "prob")), list_e), prop):
            return RatV(_q_over_list(model, state, list_e, prop, env))
        case App(App(Sym(Symbol("@", _, "hybrid")), state_e), body):
            v = evaluate(model, state, state_e, env)
            if not isinstance(v, StateV):
                raise EvalError(f"@ needs a state, got {render_value(v)}")
            return evaluate(model, v.name, body, env)
        case App(Sym(Symbol(("Q" | "@") as name, _, ("prob" | "hybrid"))), _):
            raise EvalError(f"'{name}' must be fully applied")
    fn = evaluate(model, state, expr.fn, env)
    arg = evaluate(model, state, expr.arg, env)
    return apply_value(model, fn, arg)


def apply_value(model: Model, fn: Value, arg: Value) -> Value:
    match fn:
        case ClosureV(param, body, cenv, cstate):
            inner = dict(cenv)
            inner[param.name] = arg
            return evaluate(model, cstate, body, inner)
        case NativeV(f):
            return f(arg)
    raise EvalError(f"{render_value(fn)} is not a function")


def _truth(model: Model, state: str, expr: Expr, env: Env) -> bool:
    v = evaluate(model, state, expr, env)
    if not isinstance(v, BoolV):
        raise EvalError(f"expected a truth value, got {render_value(v)}")
    return v.value


def _rational(model: Model, state: str, expr: Expr, env: Env) -> Fraction:
    v = evaluate(model, state, expr, env)
    if not isinstance(v, RatV):
        raise EvalError(f"expected a number, got {render_value(v)}")
    return v.value


def eval_arith(model: Model, state: str, expr: Expr, env: Env | None = None) -> Fraction:
    """Evaluate a numeric expression (arithmetic over probability queries
    included) to an exact rational."""
    return _rational(model, state, expr, env or {})


# ---------- the probability operator ----------


def eval_q(
    model: Model,
    state: str,
    actions: list[GroundAction],
    prop: Expr,
    env: Env | None = None,
) -> Fraction:
    """Probability that prop holds after executing the actions in order.

    Empty action list: a 1/0 indicator of prop at the state. An action with
    no transitions at the state it is taken from raises DisabledAction;
    silently treating it as probability 0 would mask modeling mistakes.
    """
    env = env or {}
    if not actions:
        return Fraction(int(_truth(model, state, prop, env)))
    head, rest = actions[0], actions[1:]
    succ = model.frame.successors(state, head)
    if not succ:
        raise DisabledAction(state, head)
    return sum(
        rho * eval_q(model, w, rest, prop, env) for w, rho in succ
    )


def eval_q_trace(
    model: Model,
    state: str,
    actions: list[Expr | GroundAction],
    props: list[Expr],
    env: Env | None = None,
) -> Fraction:
    """Trace probability: the chance that each proposition holds right
    after its own action. Base case: the empty trace has probability 1."""
    env = env or {}
    if len(actions) != len(props):
        raise LengthMismatch(
            f"{len(actions)} actions but {len(props)} propositions"
        )
    if not actions:
        return Fraction(1)
    head = actions[0]
    ga = head if isinstance(head, GroundAction) else _ground_action(model, state, head, env)
    succ = model.frame.successors(state, ga)
    if not succ:
        raise DisabledAction(state, ga)
    total = Fraction(0)
    for w, rho in succ:
        if _truth(model, w, props[0], env):
            total += rho * eval_q_trace(model, w, actions[1:], props[1:], env)
    return total


def _q_over_list(model: Model, state: str, list_e: Expr, prop: Expr, env: Env) -> Fraction:
    """Q applied to an action-list expression. A literal cons chain is
    destructured syntactically so each action is interpreted at the state
    where it is taken; any other list expression is evaluated at the
    current state (actions are rigid, so this agrees)."""
    match list_e:
        case Sym(Symbol("nil", _, "list")):
            return Fraction(int(_truth(model, state, prop, env)))
        case App(App(Sym(Symbol("::", _, "list")), head_e), tail_e):
            ga = _ground_action(model, state, head_e, env)
            succ = model.frame.successors(state, ga)
            if not succ:
                raise DisabledAction(state, ga)
            return sum(
                rho * _q_over_list(model, w, tail_e, prop, env) for w, rho in succ
            )
    v = evaluate(model, state, list_e, env)
    if not isinstance(v, ListV):
        raise EvalError(f"Q needs an action list, got {render_value(v)}")
    actions = []
    for item in v.items:
        if not isinstance(item, ActionV):
            raise EvalError(f"Q needs actions, got {render_value(item)}")
        actions.append(item.action)
    return eval_q(model, state, actions, prop, env)


def _ground_action(model: Model, state: str, expr: Expr, env: Env) -> GroundAction:
    v = evaluate(model, state, expr, env)
    if not isinstance(v, ActionV):
        raise EvalError(f"expected an action, got {render_value(v)}")
    return v.action


# ---------- symbol denotations ----------


def _symbol_value(model: Model, state: str, s: Symbol, env: Env, expr: Expr) -> Value:
    if s.kind == "var":
        if s.name not in env:
            raise UnboundVariable(f"variable '{s.name}' is not bound", expr.span)
        return env[s.name]
    if s.kind == "free":
        return _free_value(model, state, s.name, env, expr)
    return _builtin_value(model, state, s, expr)


def _free_value(model: Model, state: str, name: str, env: Env, expr: Expr) -> Value:
    if name in env:  # parser resolves scopes, but envs from callers win
        return env[name]
    if name in model.atoms:
        arg_types = model.atoms[name]
        if not arg_types:
            return BoolV(model.holds(state, name))
        return _curry(
            len(arg_types),
            lambda args: BoolV(
                model.holds(state, name, tuple(atom_arg_key(a) for a in args))
            ),
        )
    if name in model.actions:
        arity = model.actions[name]
        if arity == 0:
            return ActionV(GroundAction(name))
        return _curry(arity, lambda args: ActionV(
            GroundAction(name, tuple(_object_name(a) for a in args))
        ))
    if name in model.rigid:
        return model.rigid[name][1]
    if name in model.objects:
        return ObjV(name)
    if name in model.states:
        return StateV(name)
    raise UnboundVariable(f"'{name}' has no interpretation in model {model.name}", expr.span)


def _object_name(v: Value) -> str:
    if not isinstance(v, ObjV):
        raise EvalError(f"action arguments must be objects, got {render_value(v)}")
    return v.name


def _curry(arity: int, fin, collected: tuple[Value, ...] = ()) -> Value:
    def step(v: Value) -> Value:
        args = collected + (v,)
        if len(args) == arity:
            return fin(args)
        return _curry(arity, fin, args)

    return NativeV(step)


def _builtin_value(model: Model, state: str, s: Symbol, expr: Expr) -> Value:
    match (s.name, s.kind):
        case ("true", "logical"):
            return TRUE
        case ("false", "logical"):
            return FALSE
        case ("~", "logical"):
            return NativeV(lambda a: BoolV(not _bool(a)))
        case ("/\\", "logical"):
            return _binop(lambda a, b: BoolV(_bool(a) and _bool(b)))
        case ("\\/", "logical"):
            return _binop(lambda a, b: BoolV(_bool(a) or _bool(b)))
        case ("->", "logical"):
            return _binop(lambda a, b: BoolV((not _bool(a)) or _bool(b)))
        case ("<->", "logical"):
            return _binop(lambda a, b: BoolV(_bool(a) == _bool(b)))
        case ("=", "rel"):
            return _binop(lambda a, b: BoolV(values_equal(a, b)))
        case ("<", "rel"):
            return _binop(lambda a, b: BoolV(_num(a) < _num(b)))
        case ("+", "arith"):
            return _binop(lambda a, b: RatV(_num(a) + _num(b)))
        case ("*", "arith"):
            return _binop(lambda a, b: RatV(_num(a) * _num(b)))
        case ("/", "arith"):
            return _binop(_divide)
        case ("nil", "list"):
            return ListV(())
        case ("::", "list"):
            return _binop(lambda a, b: ListV((a,) + _list(b)))
        case ("in", "list"):
            return _binop(
                lambda a, b: BoolV(any(values_equal(a, x) for x in _list(b)))
            )
        case ("|.|", "list"):
            return NativeV(lambda a: RatV(Fraction(len(_list(a)))))
        case ("-", "list"):
            return _binop(
                lambda a, b: ListV(
                    tuple(x for x in _list(a) if not values_equal(x, b))
                )
            )
        case ("in", "hybrid"):
            return NativeV(lambda v: BoolV(isinstance(v, StateV) and v.name == state))
        case (("forall" | "exists") as q, "quant"):
            return _quantifier_value(model, state, q, expr)
    raise EvalError(f"builtin '{s.name}' has no direct denotation", expr.span)


def _quantifier_value(model: Model, state: str, q: str, expr: Expr) -> Value:
    def run(f: Value) -> Value:
        dom = _domain(model, _param_type(f, expr))
        results = (_bool(apply_value(model, f, v)) for v in dom)
        return BoolV(all(results) if q == "forall" else any(results))

    return NativeV(run)


def _param_type(f: Value, expr: Expr) -> Type:
    if isinstance(f, ClosureV) and f.param.type is not None:
        return f.param.type
    raise EvalError("quantifier needs a lambda with a typed binder", expr.span)


def _domain(model: Model, ty: Type) -> list[Value]:
    if ty == BOOL:
        return [FALSE, TRUE]
    if ty == OBJ:
        return [ObjV(o) for o in model.objects]
    if ty == STATE:
        return [StateV(w) for w in model.states]
    raise UnenumerableQuantifier(f"cannot enumerate the domain of {ty}")


def _binop(f) -> Value:
    return NativeV(lambda a: NativeV(lambda b: f(a, b)))


def _bool(v: Value) -> bool:
    if not isinstance(v, BoolV):
        raise EvalError(f"expected a truth value, got {render_value(v)}")
    return v.value


def _num(v: Value) -> Fraction:
    if not isinstance(v, RatV):
        raise EvalError(f"expected a number, got {render_value(v)}")
    return v.value


def _list(v: Value) -> tuple[Value, ...]:
    if not isinstance(v, ListV):
        raise EvalError(f"expected a list, got {render_value(v)}")
    return v.items


def _divide(a: Value, b: Value) -> Value:
    d = _num(b)
    if d == 0:
        raise DivisionByZero(f"division of {render_value(a)} by zero")
    return RatV(_num(a) / d)


def truth(model: Model, state: str, expr: Expr, env: Env | None = None) -> bool:
    """Convenience: evaluate a proposition to a Python bool."""
    return _truth(model, state, expr, env or {})


def describe(expr: Expr) -> str:
    """Short rendering for diagnostics; falls back to repr for terms the
    surface grammar cannot express."""
    try:
        return print_formula(expr)
    except ValueError:
        return repr(expr)
