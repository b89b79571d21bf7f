"""Plain-text system files.

Format (UTF-8, one item per line):

    polysys 1
    n <n>
    degrees <d_1> ... <d_n>
    poly 1
    <j_0> ... <j_n> <re> <im>
    ...
    end
    poly 2
    ...
    end

Each monomial line lists the exponents (summing to the equation's degree)
followed by the real and imaginary parts of the coefficient, written with
full round-trip precision.  Unlisted monomials are zero.  Serialization emits
nonzero monomials in the canonical coefficient order, so parse-serialize is
byte idempotent.
"""

from __future__ import annotations

from ..hpoly import HomogeneousPoly, PolySystem, exponents

__all__ = ["SystemFileError", "parse_system", "serialize_system"]

HEADER = "polysys 1"


class SystemFileError(ValueError):
    """Malformed system file; carries the 1-based offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(message)
        self.line = line


def serialize_system(F: PolySystem) -> str:
    lines = [HEADER, f"n {F.n}", "degrees " + " ".join(str(d) for d in F.degrees)]
    for i, poly in enumerate(F.polys, start=1):
        lines.append(f"poly {i}")
        exps = exponents(poly.n_vars, poly.degree)
        for row, c in zip(exps.tolist(), poly.coeffs):
            if c == 0:
                continue
            lines.append(" ".join(str(int(e)) for e in row)
                         + f" {float(c.real)!r} {float(c.imag)!r}")
        lines.append("end")
    return "\n".join(lines) + "\n"


def parse_system(text: str) -> PolySystem:
    lines = text.splitlines()
    pos = 0

    def take(expect: str | None = None) -> tuple[str, int]:
        nonlocal pos
        while pos < len(lines) and not lines[pos].strip():
            pos += 1
        if pos >= len(lines):
            raise SystemFileError(f"unexpected end of file (wanted {expect})", len(lines))
        pos += 1
        return lines[pos - 1].strip(), pos

    line, ln = take("header")
    if line != HEADER:
        raise SystemFileError(f"bad header {line!r}, expected {HEADER!r}", ln)
    line, ln = take("n")
    parts = line.split()
    if len(parts) != 2 or parts[0] != "n":
        raise SystemFileError("expected 'n <count>'", ln)
    try:
        n = int(parts[1])
    except ValueError:
        raise SystemFileError(f"bad equation count {parts[1]!r}", ln) from None
    if n < 1:
        raise SystemFileError(f"need at least one equation, got {n}", ln)

    line, ln = take("degrees")
    parts = line.split()
    if parts[:1] != ["degrees"] or len(parts) != n + 1:
        raise SystemFileError(f"expected 'degrees' with {n} values", ln)
    try:
        degrees = [int(p) for p in parts[1:]]
    except ValueError:
        raise SystemFileError("non-integer degree", ln) from None
    if any(d < 1 for d in degrees):
        raise SystemFileError("degrees must be positive", ln)

    n_vars = n + 1
    polys = []
    for i in range(1, n + 1):
        line, ln = take(f"poly {i}")
        if line != f"poly {i}":
            raise SystemFileError(f"expected 'poly {i}', got {line!r}", ln)
        d = degrees[i - 1]
        terms: dict[tuple[int, ...], complex] = {}
        while True:
            line, ln = take("monomial or end")
            if line == "end":
                break
            parts = line.split()
            if len(parts) != n_vars + 2:
                raise SystemFileError(
                    f"monomial line needs {n_vars} exponents and 2 reals", ln)
            try:
                exps = tuple(int(p) for p in parts[:n_vars])
                re_part = float(parts[n_vars])
                im_part = float(parts[n_vars + 1])
            except ValueError:
                raise SystemFileError("malformed exponent or coefficient", ln) from None
            if any(e < 0 for e in exps):
                raise SystemFileError("negative exponent", ln)
            if sum(exps) != d:
                raise SystemFileError(
                    f"exponents sum to {sum(exps)}, expected degree {d}", ln)
            terms[exps] = terms.get(exps, 0.0) + complex(re_part, im_part)
        if not terms or all(v == 0 for v in terms.values()):
            raise SystemFileError(f"polynomial {i} is identically zero", ln)
        polys.append(HomogeneousPoly.from_terms(n_vars, d, terms))
    while pos < len(lines):
        if lines[pos].strip():
            raise SystemFileError(f"trailing content {lines[pos].strip()!r}", pos + 1)
        pos += 1
    try:
        return PolySystem(tuple(polys))
    except ValueError as exc:
        raise SystemFileError(str(exc), len(lines)) from None
