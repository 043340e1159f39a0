"""Fraction-free sparse row echelon rank over the integers (reference kernel)."""
from math import gcd


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g not in (0, 1):
        row = {c: v // g for c, v in row.items()}
    return row


def rank_int_rows(rows) -> int:
    """Rank of integer rows given as dict col->value; entries must be Python ints."""
    pivots: dict[int, dict[int, int]] = {}
    r = 0
    for src in rows:
        row = {c: v for c, v in src.items() if v}
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = _primitive(row)
                r += 1
                break
            a, p = row[lead], piv[lead]
            g = gcd(a, p)
            a //= g
            p //= g
            new = {c: p * v for c, v in row.items()}
            for c, v in piv.items():
                w = new.get(c, 0) - a * v
                if w:
                    new[c] = w
                else:
                    new.pop(c, None)
            row = _primitive(new) if new else new
    return r
