import sys, time
sys.path.insert(0, "tests")
sys.path.insert(0, "src")

from fixture_algebras import cyclic_nakayama, dual_numbers
from sphertwist.algebra import quotient_surjection
from sphertwist.errors import NotConcentrated
from sphertwist.frobenius import build_context
from sphertwist.homology import (
    cotwist_data, ext_dims, identity_surjection, left_module_along,
    tensor_square, tor_bimodule, tor_dims)
from sphertwist.modules import Module, restrict_scalars, simple_modules
from sphertwist.resolutions import stable_module

t0 = time.time()
a = dual_numbers()
s = simple_modules(a)[0]
print("ext dual S,S:", ext_dims(a, s, s, 6), "want [1]*6")

pk = quotient_surjection(a, [a.basis_vector(1)])
sr = restrict_scalars(pk, Module.regular(pk.target))
sl = left_module_along(pk)
print("tor dual k,k :", tor_dims(a, sr, sl, 6), "want [1]*6")
print("tor (2nd)    :", tor_dims(a, sr, sl, 6, resolve_second=True))

ctx = build_context(a, Module.regular(a), [(s, 1)])
con = stable_module(ctx)
conl = left_module_along(ctx.to_stable)
print("ext ctx1 con,con:", ext_dims(ctx.endo, con, con, 5), "want [1,0,1,0,0]")
print("tor ctx1        :", tor_dims(ctx.endo, con, conl, 5), "want [1,0,1,0,0]")
print("tor ctx1 (2nd)  :", tor_dims(ctx.endo, con, conl, 5, resolve_second=True))
print("[%.2fs]" % (time.time() - t0))

cd = cotwist_data(ctx.to_stable)
print("ctx1 cotwist tor:", cd.tor_dims, "concentrated:", cd.concentrated,
      "shift:", cd.shift, "bimod dim:", cd.cotwist_bimodule.dim)
print("ctx1 cone:", sorted(cd.cone_dims.items()))
bi = tor_bimodule(ctx.to_stable, 2)
print("ctx1 bimodule: dim", bi.dim, "proj R/L:", bi.right_projective, bi.left_projective)
print("[%.2fs]" % (time.time() - t0))

cid = cotwist_data(identity_surjection(a))
print("identity tor:", cid.tor_dims, "cone:", sorted(cid.cone_dims.items()),
      "complete:", cid.complete)

cdk = cotwist_data(pk)
print("dual->k tor:", cdk.tor_dims, "concentrated:", cdk.concentrated,
      "complete:", cdk.complete)
try:
    tor_bimodule(pk, 2)
    print("dual->k bimodule: NO ERROR (bad)")
except NotConcentrated as e:
    print("dual->k bimodule: NotConcentrated ok")
print("[%.2fs]" % (time.time() - t0))

a3 = cyclic_nakayama(3)
sims3 = simple_modules(a3)
ctx3 = build_context(a3, Module.regular(a3), [(x, 1) for x in sims3])
t1 = time.time()
cd3 = cotwist_data(ctx3.to_stable)
print("ctx3 cotwist tor:", cd3.tor_dims, "concentrated:", cd3.concentrated,
      "shift:", cd3.shift, "bimod dim:", cd3.cotwist_bimodule.dim)
b3 = cd3.cotwist_bimodule
print("ctx3 bimodule proj R/L:", b3.right_projective, b3.left_projective)
print("ctx3 cotwist took %.2fs  [total %.2fs]" % (time.time() - t1, time.time() - t0))
