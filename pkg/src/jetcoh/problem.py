"""Problem documents: parsing, validation and printing.

    variety torus
    vars x* y*
    bracket x y : x*y
    window weight 2
    window multidegree 2 2
    window lcdegree 1

Polynomials use integers, rationals p/q, declared variables, + - * ^ and
parentheses.  Jet variables ``x_3`` are accepted where a jet-ring element is
expected (command arguments), never inside bracket entries.
"""
import ast
import re
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from .errors import DomainError
from .jets import BaseRing
from .poly import SparsePoly, format_poly

MODULE = "cli"

IDENT = re.compile(r"^[A-Za-z][A-Za-z0-9]*$")


class ParseError(DomainError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message, MODULE)


@dataclass
class ProblemSpec:
    variety: str
    names: Tuple[str, ...]
    invertible: frozenset
    brackets: Dict[Tuple[int, int], SparsePoly] = field(default_factory=dict)
    weight: int = 2
    multidegree: Tuple[int, ...] = ()
    total: Optional[int] = None
    lcdegree: int = 1

    @property
    def base(self) -> BaseRing:
        return BaseRing(self.names, self.invertible)

    def __eq__(self, other):
        if not isinstance(other, ProblemSpec):
            return NotImplemented
        nz = lambda b: {k: v for k, v in b.items() if v}
        return (self.variety, self.names, self.invertible, self.weight, self.multidegree, self.total,
                self.lcdegree) == (other.variety, other.names, other.invertible, other.weight,
                                   other.multidegree, other.total, other.lcdegree) \
            and nz(self.brackets) == nz(other.brackets)


# ---------------------------------------------------------------- expressions

def parse_expression(text: str, names, invertible=frozenset(), jets=False, line=None) -> SparsePoly:
    """Polynomial expression → SparsePoly over variables ``(a, level)``.

    With ``jets`` the names ``x_i`` denote level-i jet variables.
    """
    ivars = frozenset((a, 0) for a in invertible)
    src = text.strip().replace("^", "**")
    if not src:
        raise ParseError("empty expression", line)
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"syntax error in expression {text.strip()!r}: {exc.msg}", line) from None

    def var_of(name):
        if name in names:
            return (names.index(name), 0)
        if jets and "_" in name:
            head, _, lvl = name.rpartition("_")
            if head in names and lvl.isdigit():
                return (names.index(head), int(lvl))
        raise ParseError(f"undeclared variable {name!r}", line)

    def const_value(node):
        v = ev(node)
        if not v.is_constant():
            raise ParseError("exponents and divisors must be constants", line)
        return v.constant_term()

    def ev(node) -> SparsePoly:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return SparsePoly.const(node.value, ivars)
        if isinstance(node, ast.Name):
            return SparsePoly.var(var_of(node.id), invertible=ivars)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Add):
                return ev(node.left) + ev(node.right)
            if isinstance(node.op, ast.Sub):
                return ev(node.left) - ev(node.right)
            if isinstance(node.op, ast.Mult):
                return ev(node.left) * ev(node.right)
            if isinstance(node.op, ast.Div):
                den = const_value(node.right)
                if not den:
                    raise ParseError("division by zero", line)
                return ev(node.left) * (1 / den)
            if isinstance(node.op, ast.Pow):
                e = const_value(node.right)
                if e.denominator != 1:
                    raise ParseError("exponents must be integers", line)
                base = ev(node.left)
                try:
                    return base ** int(e)
                except DomainError as exc:
                    raise ParseError(str(exc.args[0]), line) from None
        raise ParseError(f"unsupported syntax in expression {text.strip()!r}", line)

    return ev(tree)


# ---------------------------------------------------------------- documents

def parse_problem(text: str) -> ProblemSpec:
    variety = None
    names = None
    invertible = set()
    raw_brackets = []
    weight = None
    multidegree = None
    total = None
    lcdegree = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "variety":
            if not rest or len(rest.split()) != 1:
                raise ParseError("expected 'variety <name>'", lineno)
            variety = rest
        elif key == "vars":
            if names is not None:
                raise ParseError("duplicate 'vars' line", lineno)
            toks = rest.split()
            if not toks:
                raise ParseError("expected at least one variable", lineno)
            names = []
            for k, tok in enumerate(toks):
                star = tok.endswith("*")
                nm = tok[:-1] if star else tok
                if not IDENT.match(nm):
                    raise ParseError(f"bad variable name {tok!r} (letters and digits only)", lineno)
                if nm in names:
                    raise ParseError(f"variable {nm!r} declared twice", lineno)
                names.append(nm)
                if star:
                    invertible.add(k)
        elif key == "bracket":
            lhs, colon, expr = rest.partition(":")
            pair = lhs.split()
            if not colon or len(pair) != 2:
                raise ParseError("expected 'bracket <v1> <v2> : <expression>'", lineno)
            raw_brackets.append((lineno, pair[0], pair[1], expr))
        elif key == "window":
            toks = rest.split()
            if not toks:
                raise ParseError("expected a window kind", lineno)
            kind, args = toks[0], toks[1:]
            try:
                vals = [int(t) for t in args if t != "total"]
            except ValueError:
                raise ParseError(f"window values must be integers: {' '.join(args)}", lineno) from None
            if kind == "weight":
                if len(args) != 1 or vals[0] < 0:
                    raise ParseError("expected 'window weight <W>' with W >= 0", lineno)
                weight = vals[0]
            elif kind == "multidegree":
                if "total" in args:
                    i = args.index("total")
                    if i != len(args) - 2:
                        raise ParseError("'total <T>' must end the multidegree window", lineno)
                    total = int(args[-1])
                    bounds = [int(t) for t in args[:i]]
                else:
                    bounds = vals
                if not bounds or any(b < 0 for b in bounds):
                    raise ParseError("multidegree bounds must be non-negative integers", lineno)
                multidegree = tuple(bounds)
            elif kind == "lcdegree":
                if len(args) != 1 or vals[0] not in (0, 1, 2):
                    raise ParseError("expected 'window lcdegree <0|1|2>'", lineno)
                lcdegree = vals[0]
            else:
                raise ParseError(f"unknown window kind {kind!r}", lineno)
        else:
            raise ParseError(f"unknown key {key!r}", lineno)
    if names is None:
        raise ParseError("missing 'vars' line")
    brackets: Dict[Tuple[int, int], SparsePoly] = {}
    for lineno, v1, v2, expr in raw_brackets:
        for v in (v1, v2):
            if v not in names:
                raise ParseError(f"bracket on undeclared variable {v!r}", lineno)
        a, b = names.index(v1), names.index(v2)
        if a == b:
            raise ParseError(f"bracket {{{v1},{v1}}} must not be given", lineno)
        p = parse_expression(expr, names, frozenset(invertible), line=lineno)
        if a > b:
            a, b, p = b, a, -p
        if (a, b) in brackets and brackets[(a, b)] != p:
            raise ParseError(f"conflicting entries for bracket {{{names[a]},{names[b]}}}", lineno)
        brackets[(a, b)] = p
    if multidegree is not None and len(multidegree) != len(names):
        raise ParseError(f"multidegree window needs {len(names)} bounds, got {len(multidegree)}")
    return ProblemSpec(variety or "unnamed", tuple(names), frozenset(invertible), brackets,
                       2 if weight is None else weight,
                       multidegree if multidegree is not None else (2,) * len(names),
                       total, 1 if lcdegree is None else lcdegree)


def format_problem(spec: ProblemSpec) -> str:
    name = lambda v: spec.names[v[0]]
    lines = [f"variety {spec.variety}",
             "vars " + " ".join(n + ("*" if k in spec.invertible else "") for k, n in enumerate(spec.names))]
    for (a, b), p in sorted(spec.brackets.items()):
        if p:
            lines.append(f"bracket {spec.names[a]} {spec.names[b]} : {format_poly(p, name)}")
    lines.append(f"window weight {spec.weight}")
    md = "window multidegree " + " ".join(str(x) for x in spec.multidegree)
    if spec.total is not None:
        md += f" total {spec.total}"
    lines.append(md)
    lines.append(f"window lcdegree {spec.lcdegree}")
    return "\n".join(lines) + "\n"
