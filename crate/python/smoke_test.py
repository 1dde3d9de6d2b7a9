"""Smoke test for the Python bindings. Build first:

    cd crates/py && pip install --no-build-isolation -e .
"""

import math

import extremal

PHI = (1 + math.sqrt(5)) / 2

value, radius = extremal.constant("alpha-star", 40)
assert value.startswith("0.7493265463303675579439619480913446720913"), value
assert float(radius) < 1e-40

btv = extremal.Family("btv:1")
assert len(btv) == 2 and btv.dim == 2
b = extremal.jsr_bounds(btv, depth=8)
assert b.witness == "01"
assert abs(b.lower_f64 - PHI) < 1e-12 and abs(b.upper_f64 - PHI) < 1e-12

d = extremal.Family("example-p2")
lifted = d.lift()
assert (len(d), d.dim, len(lifted), lifted.dim) == (4, 4, 2, 28)

w = extremal.word("sturmian:gamma=(3-sqrt5)/2", 500)
assert extremal.is_balanced(w)
rows = extremal.complexity("sturmian:gamma=(3-sqrt5)/2", 10)
assert [r[1] for r in rows] == [n + 1 for n in range(1, 11)]

assert extremal.encode("201", 3) == "100001010"
assert extremal.decode("100001010", 3) == "201"
assert extremal.survives("0110", 2) and not extremal.survives("11", 2)
assert extremal.normalize_phase("prefix:00,pad=cycle(10)", 2) == 1

toy = extremal.Family("toy:3")
assert extremal.verify_feqt(toy, "2102")
assert extremal.verify_encode_product(toy, "2102")

g = extremal.growth(btv, "periodic:01", n=200, rho=repr(PHI))
assert max(r[3] for r in g) - min(r[3] for r in g) < 2
assert extremal.extremality(btv, "periodic:0", n=400, depth=6) == "inconsistent"

try:
    extremal.Family("btv:nonsense")
except ValueError:
    pass
else:
    raise AssertionError("bad spec accepted")

print("python smoke test: ok")
