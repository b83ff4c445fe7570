"""Exact probabilistic temporal logic over finite labeled frames.

Parse formulas and models, typecheck, evaluate with exact rationals,
check satisfaction and entailment, and translate classical finite
probability spaces into one-step frames.
"""

from .adequacy import (
    Complement,
    Intersection,
    ProbabilitySpace,
    SetExpr,
    Singleton,
    Union,
    check_adequacy,
    denote,
    measure,
    parse_set_expr,
    parse_space,
    serialize_space,
    translate_event,
    translate_space,
    validate_space,
)
from .checker import (
    CheckReport,
    Theory,
    check_independent,
    check_shortcut,
    entails,
    globally_satisfies,
    satisfies,
)
from .errors import (
    DisabledAction,
    DivisionByZero,
    EvalError,
    LengthMismatch,
    ModelError,
    NameClash,
    ParseError,
    ProbabilityRangeError,
    ProbabilitySumError,
    PtlError,
    SourceSpan,
    TypeError_,
    TypeMismatch,
    UnboundSymbol,
    UnboundVariable,
    UnenumerableQuantifier,
    UnknownAction,
    UnknownObject,
    UnknownOutcome,
    UnknownState,
    DuplicateDeclaration,
    DuplicateTransition,
)
from .evaluator import eval_arith, eval_q, eval_q_trace, evaluate, truth
from .model import (
    Frame,
    Model,
    ModelSpec,
    serialize_model,
    successors,
    validate_model,
)
from .parser import (
    parse,
    parse_formula,
    parse_formula_file,
    parse_model,
    parse_rational,
    parse_type,
)
from .printer import print_formula
from .syntax import (
    ACTION,
    BOOL,
    NUM,
    OBJ,
    PROP,
    STATE,
    App,
    Arrow,
    Base,
    Box,
    Diamond,
    DiamondAnn,
    Expr,
    Lam,
    ListT,
    QTrace,
    RatLit,
    Sym,
    Symbol,
    Type,
    alpha_eq,
    desugar,
)
from .typecheck import check_type, infer_type
from .values import BoolV, GroundAction, ListV, ObjV, RatV, StateV, Value

__version__ = "0.1.0"

__all__ = [
    "ACTION",
    "App",
    "Arrow",
    "BOOL",
    "Base",
    "BoolV",
    "Box",
    "CheckReport",
    "Complement",
    "Diamond",
    "DiamondAnn",
    "DisabledAction",
    "DivisionByZero",
    "DuplicateDeclaration",
    "DuplicateTransition",
    "EvalError",
    "Expr",
    "Frame",
    "GroundAction",
    "Intersection",
    "Lam",
    "LengthMismatch",
    "ListT",
    "ListV",
    "Model",
    "ModelError",
    "ModelSpec",
    "NUM",
    "NameClash",
    "OBJ",
    "ObjV",
    "PROP",
    "ParseError",
    "ProbabilityRangeError",
    "ProbabilitySpace",
    "ProbabilitySumError",
    "PtlError",
    "QTrace",
    "RatLit",
    "RatV",
    "STATE",
    "SetExpr",
    "Singleton",
    "SourceSpan",
    "StateV",
    "Sym",
    "Symbol",
    "Theory",
    "Type",
    "TypeError_",
    "TypeMismatch",
    "UnboundSymbol",
    "UnboundVariable",
    "UnenumerableQuantifier",
    "Union",
    "UnknownAction",
    "UnknownObject",
    "UnknownOutcome",
    "UnknownState",
    "Value",
    "alpha_eq",
    "check_adequacy",
    "check_independent",
    "check_shortcut",
    "check_type",
    "denote",
    "desugar",
    "entails",
    "eval_arith",
    "eval_q",
    "eval_q_trace",
    "evaluate",
    "globally_satisfies",
    "infer_type",
    "measure",
    "parse",
    "parse_formula",
    "parse_formula_file",
    "parse_model",
    "parse_rational",
    "parse_set_expr",
    "parse_space",
    "parse_type",
    "print_formula",
    "satisfies",
    "serialize_model",
    "serialize_space",
    "successors",
    "translate_event",
    "translate_space",
    "truth",
    "validate_model",
    "validate_space",
]
