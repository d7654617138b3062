"""Smoke test for the icc_index extension. Run after `maturin develop`."""

import os

import icc_index as icc

d1_template = icc.IccTemplate([2, 2, 2])
d1 = d1_template.build_digraph()
assert d1 == icc.gap_family(3)
assert d1.side_info(1) == [5, 6]
assert d1_template.code_length() == 4

code = d1_template.encode()
assert code.supports() == [[1, 4], [2, 5], [3, 6], [1, 2, 3]]
assert icc.verify_code(d1, code) == []
assert icc.verify_code(d1, code.without_symbol(3)) == [1, 2, 3]

report = icc.compare(d1)
assert report == {"n": 6, "l_cyc": 5, "l_cc": 6, "l_icc": 4, "mais": 4, "optimal": True}, report
assert icc.mais(d1) == 4

packets = [os.urandom(4) for _ in range(d1.n)]
coded = d1_template.encode(packets, 32)
for v in range(1, d1.n + 1):
    side = {u: packets[u - 1] for u in d1.side_info(v)}
    assert d1_template.decode(coded, v, side) == packets[v - 1]

d2 = icc.IccTemplate([1, 2, 2])
assert d2.encode().supports() == [[2, 4], [3, 5], [1, 2, 3]]
assert d2.certify()["optimal"]

t = icc.IccTemplate.random(4, seed=3)
assert icc.IccTemplate.from_json(t.to_json()) == t
assert t.check_terminal_containment() in (True, None)

try:
    icc.IccTemplate([2, 2], attach={(1, 2): 5, (2, 1): 1})
except ValueError:
    pass
else:
    raise AssertionError("out-of-range attachment accepted")

print("icc_index smoke test passed")
