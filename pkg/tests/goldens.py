"""Reference matrices and formulas used as golden values."""

from quongram.symring import Poly


def q(ij: str) -> Poly:
    return Poly.var(int(ij[0]), int(ij[1]))


def prod(*names: str) -> Poly:
    out = Poly.const(1)
    for name in names:
        out = out * q(name)
    return out


ORDER_123 = [(1, 2, 3), (1, 3, 2), (3, 1, 2), (3, 2, 1), (2, 3, 1), (2, 1, 3)]

# upper three rows of the generic 6x6 Gram matrix in ORDER_123
UPPER_123 = [
    [prod(), prod("23"), prod("23", "13"), prod("12", "13", "23"), prod("12", "13"), prod("12")],
    [prod("32"), prod(), prod("13"), prod("13", "12"), prod("12", "13", "32"), prod("12", "32")],
    [prod("32", "31"), prod("31"), prod(), prod("12"), prod("12", "32"), prod("12", "31", "32")],
]
# lower right block as printed; the lower left block is the conjugate of the upper right one
LOWER_RIGHT_123 = [
    [prod(), prod("32"), prod("31", "32")],
    [prod("23"), prod(), prod("31")],
    [prod("13", "23"), prod("13"), prod()],
]


def gram_123_rows() -> list[list[Poly]]:
    upper_right = [row[3:] for row in UPPER_123]
    lower_left = [[upper_right[r][c].conjugate() for c in range(3)] for r in range(3)]
    return UPPER_123 + [lower_left[r] + LOWER_RIGHT_123[r] for r in range(3)]


ORDER_113 = [(1, 1, 3), (1, 3, 1), (3, 1, 1)]
_one_11 = 1 + q("11")
GRAM_113 = [
    [_one_11, q("13") + q("11") * q("13"), q("13") ** 2 + q("11") * q("13") ** 2],
    [q("31") + q("31") * q("11"), 1 + prod("11", "13", "31"), q("13") + q("11") * q("13")],
    [q("31") ** 2 + q("31") ** 2 * q("11"), q("31") + q("31") * q("11"), _one_11],
]

# printed inverse numerators over Delta = (1+q11)(1-q13 q31)(1-q11 q13 q31)
INVERSE_113_NUMERATORS = [
    [Poly.const(1), -_one_11 * q("13"), q("11") * q("13") ** 2],
    [-q("31") * _one_11, _one_11 * (1 + prod("13", "31")), -_one_11 * q("13")],
    [q("13") ** 2 * q("11"), -q("31") * _one_11, Poly.const(1)],
]
INVERSE_113_DELTA = _one_11 * (1 - prod("13", "31")) * (1 - prod("11", "13", "31"))


def box(*labels: int) -> Poly:
    out = Poly.const(1)
    for a in labels:
        for b in labels:
            if a != b:
                out = out * Poly.var(a, b)
    return 1 - out


DET_123 = box(1, 2) ** 2 * box(1, 3) ** 2 * box(2, 3) ** 2 * box(1, 2, 3)
