#!/usr/bin/env python3
"""Print the condition scan for every bundled fan and for the two semi-Fano builtins."""
import sys

from twopt.toric import SEMI_FANO_COMPOSITIONS, builtin_X1, builtin_X2, builtin_fans, condition_scan, load_toric


def run(bound=3):
    ok = True
    for name in builtin_fans():
        spec = load_toric(name)
        for S in spec.cones:
            rep = condition_scan(spec, [j + 1 for j in S], bound)
            ok &= rep.ok
            print(rep.line())
    for spec in (builtin_X1(), builtin_X2()):
        for comp, expected in SEMI_FANO_COMPOSITIONS[spec.name].items():
            rep = condition_scan(spec, comp, bound)
            rep.expected = expected
            ok &= rep.ok
            print(rep.line())
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(run(int(sys.argv[1]) if len(sys.argv) > 1 else 3))
