"""Tiny arithmetic evaluator for angle literals such as ``-pi/2`` or ``3*pi/4``."""

import ast
import math
import operator

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}
_NAMES = {"pi": math.pi}
_FUNCS = {"sqrt": math.sqrt, "acos": math.acos, "arccos": math.acos,
          "cos": math.cos, "sin": math.sin}


def eval_real(text):
    """Evaluate a real-valued arithmetic expression.

    Only numbers, ``pi``, ``+ - * / **`` and a handful of functions
    (``sqrt``, ``acos``/``arccos``, ``cos``, ``sin``) are accepted.
    Raises ``ValueError`` for anything else.
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"malformed expression {text!r}") from exc
    return float(_eval(tree.body, text))


def _eval(node, text):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
            and not isinstance(node.value, bool):
        return node.value
    if isinstance(node, ast.Name) and node.id in _NAMES:
        return _NAMES[node.id]
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        try:
            return _BINOPS[type(node.op)](_eval(node.left, text), _eval(node.right, text))
        except ZeroDivisionError as exc:
            raise ValueError(f"division by zero in {text!r}") from exc
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        return _UNARY[type(node.op)](_eval(node.operand, text))
    if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords):
        return _FUNCS[node.func.id](_eval(node.args[0], text))
    raise ValueError(f"unsupported token in expression {text!r}")


def split_top_level(text, sep=","):
    """Split on ``sep`` while ignoring separators nested in () or []."""
    parts, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced brackets in {text!r}")
        elif ch == sep and depth == 0:
            parts.append(text[start:k])
            start = k + 1
    if depth != 0:
        raise ValueError(f"unbalanced brackets in {text!r}")
    parts.append(text[start:])
    return parts


def format_angle(x, tol=1e-12):
    """Render an angle as a short literal, using ``pi`` fractions when exact."""
    if abs(x) < tol:
        return "0"
    for den in (1, 2, 3, 4, 6, 8, 12, 16):
        num = x * den / math.pi
        k = round(num)
        if k != 0 and abs(num - k) < tol * den:
            g = math.gcd(abs(k), den)
            k, d = k // g, den // g
            head = {1: "pi", -1: "-pi"}.get(k, f"{k}*pi")
            return head if d == 1 else f"{head}/{d}"
    return repr(float(x))
