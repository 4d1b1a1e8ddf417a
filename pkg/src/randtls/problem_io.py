"""Plain-text problem files.

Layout::

    # name shaw
    # 32 32                (rows cols)
    # param=value          (zero or more)
    <rows lines of cols entries, row-major>
    # b
    <one line of rows entries>
    # x_true
    <one line of cols entries>

Entries use 17 significant digits, which round-trips every double exactly.
"""

import ast

import numpy as np

from .errors import InvalidInputError
from .operators import DenseOperator
from .problems import TestProblem

_FMT = "%.17g"


def _line(values):
    return " ".join(_FMT % v for v in values)


def write_problem(problem, path):
    """Write ``problem`` (materialized densely) to ``path``."""
    a = problem.matrix()
    rows, cols = a.shape
    lines = [f"# name {problem.name}", f"# {rows} {cols}"]
    params = dict(problem.metadata)
    params.setdefault("n", problem.n)
    lines += [f"# {key}={value!r}" for key, value in params.items()]
    lines += [_line(row) for row in a]
    lines += ["# b", _line(problem.b), "# x_true", _line(problem.x_true)]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_value(text):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def read_problem(path):
    """Read a problem written by :func:`write_problem`.

    Raises
    ------
    InvalidInputError
        If the file does not follow the layout.
    """
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    try:
        if not lines[0].startswith("# name "):
            raise InvalidInputError(f"{path}: missing '# name' header")
        name = lines[0][len("# name "):]
        rows, cols = (int(v) for v in lines[1][1:].split())
        pos = 2
        params = {}
        while lines[pos].startswith("#"):
            key, _, value = lines[pos][1:].strip().partition("=")
            params[key.strip()] = _parse_value(value.strip())
            pos += 1
        a = np.array([[float(v) for v in ln.split()] for ln in lines[pos:pos + rows]])
        pos += rows
        if lines[pos] != "# b" or lines[pos + 2] != "# x_true":
            raise InvalidInputError(f"{path}: missing b or x_true section")
        b = np.array([float(v) for v in lines[pos + 1].split()])
        x = np.array([float(v) for v in lines[pos + 3].split()])
    except (IndexError, ValueError) as exc:
        raise InvalidInputError(f"{path}: malformed problem file ({exc})") from exc
    if a.shape != (rows, cols) or b.size != rows or x.size != cols:
        raise InvalidInputError(f"{path}: sizes do not match the '{rows} {cols}' header")
    n = int(params.pop("n", cols))
    return TestProblem(name, DenseOperator(a), b, x, n, params)
