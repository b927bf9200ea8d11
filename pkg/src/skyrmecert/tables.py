"""Embedded rational coefficient tables.

These are the exact inputs of the certified path.  Every entry is stored as a
``"p/q"`` string and converted on access, so the module has no import-time
dependency on the arithmetic backend.
"""

from __future__ import annotations

from .exact_arith import Rational, parse_rational

# Skyrmion expansion coefficients c_n, n = 2..43 (basis phi_n).
SKYRMION = (
    "13039/72146", "2909/229801", "-11670/500821", "-301/39257", "621/122813",
    "871/221909", "-42/55481",
    "-64/36275", "-18/77071", "94/139483", "13/40736", "-31/158602",
    "-9/42953", "2/100443",
    "11/105144", "2/76485", "-5/121747", "-5/186976", "1/92977",
    "2/118683", "1/1805239",
    "-1/122146", "-1/317774", "1/332077", "1/377050", "-1/1689008",
    "-1/640158", "-1/3975308",
    "1/1402566", "1/2606123", "-1/4324868", "-1/3550160", "1/54392687",
    "1/6563655", "1/21696717",
    "-1/16289508", "-1/21329884", "1/86396283", "1/36311458",
    "1/128282128", "-1/128832209", "-1/196527234",
)

# Fundamental system u_-: coefficients c_{-,n}, n = 2..30 (c_{-,1} is fixed by
# the normalization u_-(-1) = 1).
FUNDAMENTAL_MINUS = (
    "5384/2621", "-711/1909", "417/3424", "18/1817", "2/3169",
    "-23/3399", "-22/4655", "4/4097", "7/2589", "2/3607", "-8/6937",
    "-3/4310", "1/2886", "2/4135", "-1/90728", "-1/3865", "-1/11699",
    "1/9323", "1/11955", "-1/36563", "-1/18412", "-1/192414", "1/37653",
    "1/79523", "-1/119499", "-1/105631", "-1/1857125", "1/285782",
    "1/619658",
)

# Fundamental system u_+: coefficients c_{+,n}, n = 2..30.
FUNDAMENTAL_PLUS = (
    "1371/769", "1734/3319", "230/3431", "-167/6071", "33/5231",
    "59/4580", "-19/7202", "-19/2849", "1/13495", "11/3203", "4/4737",
    "-7/4481", "-2/2217", "1/1808", "1/1529", "-1/11699", "-1/2637",
    "-1/12409", "1/5625", "1/9479", "-1/16801", "-1/12593", "1/300485",
    "1/21636", "1/56764", "-1/51904", "-1/51451", "1/307476", "1/121058",
)

# Chebyshev coefficients r_n, n = 1..30, of the reciprocal fit for the
# p-perturbation denominator; r_0 is listed separately.
RECIPROCAL_P5_R0 = "-623/23"
RECIPROCAL_P5 = (
    "-437/24", "-811/20", "-229/17", "-2391/61", "-397/30", "-178/7",
    "-184/27", "-518/27", "-98/15", "-1345/114", "-86/31", "-284/39",
    "-59/24", "-156/35", "-107/106", "-86/37", "-23/31", "-23/16",
    "-9/26", "-73/110", "-5/27", "-13/32", "-1/9", "-2/11",
    "-1/24", "-3/29", "-1/29", "-2/33", "-1/62", "-1/47",
)

# Chebyshev coefficients r_n, n = 0..23, of the reciprocal fit for W_0.
RECIPROCAL_W0 = (
    "-19/69", "11/106", "37/103", "-14/107", "-23/128", "7/81", "9/109",
    "-3/67",
    "-3/79", "2/99", "2/111", "-1/124", "-1/114", "1/376", "1/233",
    "-1/1792",
    "-1/481", "-1/8890", "1/1025", "1/4569", "-1/2336", "-1/6718",
    "1/5790", "0",
)

# Chebyshev coefficients r_n, n = 0..14, of the reciprocal fit for the
# residual denominator Q.
RECIPROCAL_Q = (
    "11/37", "-1/23", "-5/44", "-3/13", "9/44", "1/12", "-1/766", "-3/25",
    "1/101", "1/23", "1/35", "-1/36", "-1/66", "1/307", "1/125",
)


def as_rationals(entries) -> list[Rational]:
    return [parse_rational(s) for s in entries]

# Reciprocal fit r_0..r_60 of (13/10 - x^2)^8 P3^2 W0 for the q-perturbation
# bound.  Generated once with spectral_solver.fit_reciprocal (degree 60,
# float interpolation at Lobatto points, denominators capped at 10^9) and
# frozen here so the certificate does not depend on platform float details.
RECIPROCAL_QCHAIN = (
    "-67532583056/195500547", "-57607558974/350042647", "384652756277/754507906", "147569395720/620159531",
    "-309230365704/687312791", "-261072061960/652203569", "95053977513/478810444", "209274098855/610398396",
    "-23279254514/261835661", "-138229472126/439267895", "-41897201992/884665795", "187451829921/925168958",
    "77434094349/958829359", "-63007249524/487130153", "-18203172938/178878755", "6981393977/128041449",
    "46271672107/568177992", "-4041848242/263275777", "-43558151648/714638581", "-2916583124/309264303",
    "34844316989/970914421", "8351037499/516431313", "-10048846953/536358247", "-15198275941/928545200",
    "6541064672/993845001", "11085008519/912707334", "-230628493/460480143", "-7270794503/931157566",
    "-2173001950/986266551", "1966686518/480997931", "2133450449/813512932", "-1673195241/985643411",
    "-1689295037/779410265", "238724422/712037137", "998514457/699859165", "217819433/874809466",
    "-780446937/983157898", "-301117282/739340663", "215056093/612210750", "2011998/5633809",
    "-83011026/826331329", "-212173701/859614125", "-12264806/726750375", "105967369/746656584",
    "49608863/925615635", "-33996752/503415209", "-36841468/705688797", "10303637/437542036",
    "36820443/981711473", "-1612536/725590679", "-5211116/234104763", "-1880294/339070813",
    "8991616/822084081", "3998720/611507981", "-2042421/504615526", "-4946453/996321150",
    "291016/608709183", "718993/251338139", "210001/198648616", "-777821/852137156",
    "-606683/828266896",
)


def skyrmion_coefficients() -> list[Rational]:
    """``[c_2, ..., c_43]``."""
    return as_rationals(SKYRMION)


def fundamental_coefficients(sign: str) -> list[Rational]:
    """``[c_{s,2}, ..., c_{s,30}]``; ``sign`` is ``"-"``/``"minus"`` or ``"+"``/``"plus"``."""
    if sign in ("-", "minus"):
        return as_rationals(FUNDAMENTAL_MINUS)
    if sign in ("+", "plus"):
        return as_rationals(FUNDAMENTAL_PLUS)
    raise ValueError(f"sign must be '-' or '+', got {sign!r}")


def reciprocal_p5() -> list[Rational]:
    """Full Chebyshev list ``[r_0, ..., r_30]``."""
    return as_rationals((RECIPROCAL_P5_R0,) + RECIPROCAL_P5)


def reciprocal_w0() -> list[Rational]:
    return as_rationals(RECIPROCAL_W0)


def reciprocal_q() -> list[Rational]:
    return as_rationals(RECIPROCAL_Q)


def reciprocal_qchain() -> list[Rational]:
    return as_rationals(RECIPROCAL_QCHAIN)


TABLES = {
    "1": ("skyrmion", SKYRMION),
    "2": ("fundamental-minus", FUNDAMENTAL_MINUS),
    "3": ("fundamental-plus", FUNDAMENTAL_PLUS),
    "4": ("reciprocal-p5", RECIPROCAL_P5),
    "5": ("reciprocal-w0", RECIPROCAL_W0),
    "q": ("reciprocal-q", RECIPROCAL_Q),
    "qchain": ("reciprocal-qchain", RECIPROCAL_QCHAIN),
}
