"""Tour of conical zeta values and genus-zero amplitude expansions.

Run with ``python3 demos/03_conical_and_genus0.py``.  Runtime a few seconds.
"""

import mpmath as mp

from ellipsum.conical import ConeMatrix, is_C1s, is_TU, zeta_A, zeta_A_integral
from ellipsum.genus0 import (
    closed_exponent,
    gamma1p,
    sv_map_exponent,
    veneziano_exponent,
)
from ellipsum.numkernel import PrecisionCtx

ctx = PrecisionCtx(digits=30)

print("== conical zeta values from matrices of linear forms ==")
with ctx.workprec():
    A = ConeMatrix([[1, 1], [1, 1], [2, 1]])
    val = zeta_A(A, cutoff=300, ctx=ctx)
    print(f"  zeta_A  = {mp.nstr(val, 15)}")
    print(f"  zeta(3)/4 = {mp.nstr(mp.zeta(3) / 4, 15)}")
    mc, err = zeta_A_integral(A, samples=1 << 14, ctx=ctx, with_error=True)
    print(f"  Monte-Carlo cross-check = {mp.nstr(mc, 8)} +- {mp.nstr(err, 2)}")

print("\n== structural predicates on 0/1 incidence patterns ==")
pattern = [[1, 1, 0], [0, 1, 1], [1, 1, 1]]
ok, order = is_C1s(pattern, with_witness=True)
print(f"  consecutive-ones orderable: {ok} (column order {order})")
print(f"  totally unimodular        : {is_TU(pattern)}")
circular = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
print(f"  circular pattern orderable: {is_C1s(circular)}, "
      f"TU: {is_TU(circular)}")

print("\n== nested staircase sums reproduce multiple zeta values ==")
with ctx.workprec():
    st = zeta_A(ConeMatrix.mzv_staircase((1, 2)), cutoff=300, ctx=ctx)
    print(f"  staircase (1,2) = {mp.nstr(st, 15)}")
    print(f"  zeta(3)         = {mp.nstr(mp.zeta(3), 15)}")

print("\n== genus-zero four-point amplitudes ==")
open_e = veneziano_exponent(11)
print(f"  st-coefficient of the open exponent at zeta(2): {open_e.coeff(2, 1, 1)}")
print(f"  single-valued map matches the closed exponent : "
      f"{sv_map_exponent(open_e) == closed_exponent(11)}")
with ctx.workprec():
    s, t = mp.mpf("0.05"), mp.mpf("0.07")
    direct = gamma1p(s, ctx) * gamma1p(t, ctx) / gamma1p(s + t, ctx)
    series = mp.exp(veneziano_exponent(40)(s, t, ctx))
    print(f"  Gamma-ratio vs zeta-series at (0.05, 0.07): "
          f"|diff| = {mp.nstr(abs(direct - series), 3)}")
