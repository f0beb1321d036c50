import sys, time
sys.path.insert(0, "tests")
sys.path.insert(0, "src")

from fixture_algebras import dual_numbers, cyclic_nakayama, two_vertex_arrow
from sphertwist.algebra import quotient_surjection
from sphertwist.homology import identity_surjection
from sphertwist.exactlin import RationalField, Matrix
from sphertwist.modules import Module, ModuleHom, simple_modules
from sphertwist.frobenius import FrobeniusContext
from sphertwist.twist import (
    ChainComplex, ChainMap, shift, cone, cohomology_dims, hom_complex,
    tensor_complex, twist_apply, twist_triangle_check, equivalence_certificate,
    perfect_model, identity_chain_map, _regular_pieces,
)
from sphertwist.errors import CapExceeded

Q = RationalField()

t0 = time.time()

# --- dual numbers: cone of multiplication by x ---
A = dual_numbers(Q)
reg = Module.regular(A)
xmat = A.left_mult_matrix(A.basis_vector(1))
mult_x = ModuleHom(reg, reg, xmat)
src = ChainComplex(A, 0, [reg], [])
tgt = ChainComplex(A, 0, [reg], [])
f = ChainMap(src, tgt, 0, [mult_x])
cn = cone(f)
print("cone(x) support", cn.support, "cohomology", cohomology_dims(cn))

ic = identity_chain_map(tgt)
cid = cone(ic)
print("cone(identity) terms", len(cid.terms), "cohomology", cohomology_dims(cid))
print("shift(c,0) == c:", shift(tgt, 0) == tgt)
print("shift(c,2).lo", shift(tgt, 2).lo, "shift(c,-1).lo", shift(tgt, -1).lo)

# --- identity surjection: twist is zero, counit iso ---
pid = identity_surjection(A)
tz = twist_apply(pid, reg)
print("identity twist terms:", len(tz.terms))
rep = twist_triangle_check(pid, reg)
print("identity triangle:", rep.cone_profile, rep.twist_profile, "counit_iso", rep.counit_iso, "verdict", rep.verdict)

# --- FIX-A -> k: imperfect kernel ---
pk = quotient_surjection(A, [A.basis_vector(1)])
try:
    twist_apply(pk, reg)
    print("FIX-A no window: NO RAISE (BUG)")
except CapExceeded as e:
    print("FIX-A no window: CapExceeded ok")
tw = twist_apply(pk, reg, window=(0, 3))
print("FIX-A windowed twist: truncated", tw.truncated, "dims", cohomology_dims(tw), "window", tw.window)
cert_a = equivalence_certificate(pk)
print("FIX-A certificate:", cert_a)

# --- FIX-UT2: two-vertex arrow algebra, p to k x k ---
U = two_vertex_arrow(Q)
pu = quotient_surjection(U, [U.basis_vector(2)])
tu = twist_apply(pu, Module.regular(U))
print("UT2 twist regular dims", cohomology_dims(tu), "support", tu.support)
rep_u = twist_triangle_check(pu, Module.regular(U))
print("UT2 triangle:", rep_u.cone_profile, "==", rep_u.twist_profile, "verdict", rep_u.verdict)
for s in simple_modules(U):
    r = twist_triangle_check(pu, s)
    print("UT2 simple triangle:", r.cone_profile, r.verdict)
cert_u = equivalence_certificate(pu)
print("UT2 certificate:", cert_u)
print("UT2 table:", cert_u.hom_table)

print("elapsed %.1fs" % (time.time() - t0))
