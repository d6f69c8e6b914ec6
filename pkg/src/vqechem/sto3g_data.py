"""Embedded STO-3G basis parameters.

Values are the standard published STO-3G parameterization as distributed by
the Basis Set Exchange (the same tables shipped with the common ab-initio
packages).  Each entry maps an element symbol to a list of shells; a shell is
``(l, [(exponent, contraction_coefficient), ...])`` with exactly three
primitives, exponents in inverse Bohr^2.  sp shells are stored as separate
s and p shells sharing exponents.
"""

# 1s / 2s / 2p / 3s / 3p contraction coefficients are element-independent in
# STO-3G; only the exponents scale with the element.
_C1S = (0.1543289673, 0.5353281423, 0.4446345422)
_C2S = (-0.09996722919, 0.3995128261, 0.7001154689)
_C2P = (0.1559162750, 0.6076837186, 0.3919573931)
_C3S = (-0.2196203690, 0.2255954336, 0.9003984260)
_C3P = (0.01058760429, 0.5951670053, 0.4620010120)


def _shell(l, exps, coeffs):
    return (l, list(zip(exps, coeffs)))


STO3G = {
    "H": [
        _shell("s", (3.425250914, 0.6239137298, 0.1688554040), _C1S),
    ],
    "He": [
        _shell("s", (6.362421394, 1.158922999, 0.3136497915), _C1S),
    ],
    "Li": [
        _shell("s", (16.11957475, 2.936200663, 0.7946504870), _C1S),
        _shell("s", (0.6362897469, 0.1478600533, 0.04808867840), _C2S),
        _shell("p", (0.6362897469, 0.1478600533, 0.04808867840), _C2P),
    ],
    "Be": [
        _shell("s", (30.16787069, 5.495115306, 1.487192653), _C1S),
        _shell("s", (1.314833110, 0.3055389383, 0.09937074560), _C2S),
        _shell("p", (1.314833110, 0.3055389383, 0.09937074560), _C2P),
    ],
    "C": [
        _shell("s", (71.61683735, 13.04509632, 3.530512160), _C1S),
        _shell("s", (2.941249355, 0.6834830964, 0.2222899159), _C2S),
        _shell("p", (2.941249355, 0.6834830964, 0.2222899159), _C2P),
    ],
    "N": [
        _shell("s", (99.10616896, 18.05231239, 4.885660238), _C1S),
        _shell("s", (3.780455879, 0.8784966449, 0.2857143744), _C2S),
        _shell("p", (3.780455879, 0.8784966449, 0.2857143744), _C2P),
    ],
    "O": [
        _shell("s", (130.7093214, 23.80886605, 6.443608313), _C1S),
        _shell("s", (5.033151319, 1.169596125, 0.3803889600), _C2S),
        _shell("p", (5.033151319, 1.169596125, 0.3803889600), _C2P),
    ],
    "F": [
        _shell("s", (166.6791340, 30.36081233, 8.216820672), _C1S),
        _shell("s", (6.464803249, 1.502281245, 0.4885884864), _C2S),
        _shell("p", (6.464803249, 1.502281245, 0.4885884864), _C2P),
    ],
    "Cl": [
        _shell("s", (601.3456136, 109.5358542, 29.64467686), _C1S),
        _shell("s", (38.96041889, 9.053563477, 2.944499834), _C2S),
        _shell("p", (38.96041889, 9.053563477, 2.944499834), _C2P),
        _shell("s", (2.129386495, 0.5940934274, 0.2325241410), _C3S),
        _shell("p", (2.129386495, 0.5940934274, 0.2325241410), _C3P),
    ],
}
