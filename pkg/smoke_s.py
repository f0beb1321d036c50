import time

from fixture_algebras import cyclic_nakayama, dual_numbers
from sphertwist.errors import AuditFailed
from sphertwist.frobenius import build_context
from sphertwist.modules import Module, simple_modules
from sphertwist.spherical import (
    add_periodicity_check,
    permutation_tau,
    rigidity_check,
    syz_audit,
    tilting_audit,
)

t0 = time.time()

a1 = dual_numbers()
c1 = build_context(a1, Module.regular(a1), [(simple_modules(a1)[0], 1)])

a3 = cyclic_nakayama(3)
c3 = build_context(a3, Module.regular(a3), [(s, 1) for s in simple_modules(a3)])
c3b = build_context(a3, Module.regular(a3), [(simple_modules(a3)[0], 1)])

print("== ctx1 t=2 ==")
r = syz_audit(c1, 2)
print(r, "tau=", r.side2.tau, "nak=", r.nakayama)
assert r.side1.verdict and r.side2.verdict
assert r.side2.tau == (0,)
assert r.side1.ext_profile == [[1, 0, 1]]
assert r.nakayama.self_injective and r.nakayama.sigma == (0,) and r.nakayama.tau_eq_sigma

print("== ctx1 t=3 ==")
r = syz_audit(c1, 3)
print(r)
assert not r.side1.verdict and not r.side2.verdict

print("== ctx1 tilting ==")
ta = tilting_audit(c1, t=2)
print(ta)
assert ta.I0_dims == (3, 2) and ta.D0_dims == (3, 2), ta
assert ta.biperfect and ta.rho_iso and ta.lambda_iso, ta
assert not ta.composite_iso_to_projE, ta
assert ta.tensor_dim == 5, ta

print("== ctx3 t=2 ==")
r = syz_audit(c3, 2)
print(r, "tau=", r.side2.tau, "nak=", r.nakayama)
assert r.side1.verdict and r.side2.verdict
print("profile:", r.side1.ext_profile)

print("== ctx3 t=3 ==")
r = syz_audit(c3, 3)
print(r)
assert not r.side1.verdict and not r.side2.verdict

print("== ctx3 tilting ==")
ta = tilting_audit(c3, t=2)
print(ta)
assert ta.biperfect and ta.rho_iso and ta.lambda_iso, ta
assert not ta.composite_iso_to_projE, ta
assert ta.tensor_dim == 15, ta

print("== ctx3b t=2,3 ==")
for t in (2, 3):
    r = syz_audit(c3b, t)
    print(t, r)
    assert not r.side1.verdict and not r.side2.verdict

print("== ctx3b t=4 ==")
r = syz_audit(c3b, 4, with_tilting=True)
print(r, "tau=", r.side2.tau, "nak=", r.nakayama)
assert r.side1.verdict and r.side2.verdict
assert r.side2.tau == (0,)
ta = r.tilting_audit
print(ta)
assert ta.I0_dims == (7, 1) and ta.D0_dims == (7, 1), ta
assert ta.biperfect and ta.rho_iso and ta.lambda_iso, ta
assert ta.composite_iso_to_projE, ta
assert ta.tensor_dim == 8, ta

print("== ctx3b gate refusal at t=2 ==")
try:
    tilting_audit(c3b, t=2)
    raise SystemExit("gate did not refuse")
except AuditFailed as exc:
    print("refused:", exc)

print("== ctx3b window search ==")
ta = tilting_audit(c3b)
print(ta)
assert ta.t == 4, ta

print("== misc ==")
assert rigidity_check(c1, 2) is True
assert add_periodicity_check(c1, 0) is True
assert permutation_tau(c3b, 2) is None
print("tau(c3,2) =", permutation_tau(c3, 2))

print("ALL SMOKE OK in %.1fs" % (time.time() - t0))
