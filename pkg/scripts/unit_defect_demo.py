"""Show why the provisional free construction is not yet an adjoint.

The provisional unit sends a multimorphism to a one-layer formal composite,
but acting on a formal composite by a permutation twists the layers two
different ways.  Over a symmetric operad that breaks naturality of the
unit; the per-hom-set quotient identifies exactly the offending pairs.
"""

import argparse

from gmcat.adjoint import (coeq_equiv, hat_unit_report, unit_report,
                           witness_hat_unit_failure)
from gmcat.catoperad import associativity_operad, barratt_eccles
from gmcat.dmulticat import terminal_multicat


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--truncate", type=int, default=4)
    args = ap.parse_args()

    for name, build in (("barratt_eccles", barratt_eccles),
                        ("associativity", associativity_operad)):
        op = build(args.truncate)
        M = terminal_multicat(op)
        rep = hat_unit_report(M)
        print(f"{name}: provisional unit "
              f"{'ok' if rep['ok'] else 'BROKEN'} "
              f"({len(rep['failures'])} failing instances)")
        w = witness_hat_unit_failure(M)
        if w is None:
            print("  no witness: every action instance already commutes")
        else:
            print(f"  witness: morphism {w['f']} acted on by {w['delta'].d}")
            print(f"    via source action : {w['lhs']}")
            print(f"    via formal twist  : {w['rhs']}")
            print(f"    identified by the quotient: "
                  f"{coeq_equiv(M, w['lhs'], w['rhs'])}")
        q = unit_report(M)
        print(f"  quotiented unit ok={q['ok']} "
              f"({q['morphisms']} morphisms, {q['action_pairs']} "
              f"action instances)\n")


if __name__ == "__main__":
    main()