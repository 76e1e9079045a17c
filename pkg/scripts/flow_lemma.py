"""Check the flow identity as a formal series in s, order by order, and sample the closed form."""

import argparse

from qgalilei.freealg import SingularFlow, flow_phi, verify_flow_lemma


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--order", type=int, default=8)
    args = ap.parse_args()

    for n in range(1, args.order + 1):
        report = verify_flow_lemma(n)
        print(f"order {n}: {'pass' if report.passed else 'FAIL'}")
    # group law phi^s(phi^u(x)) = phi^(s+u)(x) at a sample point, in floating point
    point, a = (1.5, 0.7, -0.2), 0.3
    for s, u in ((0.25, 0.5), (1.0, -2.0), (3.0, 0.125)):
        lhs = flow_phi(s, flow_phi(u, point, a), a)
        rhs = flow_phi(s + u, point, a)
        gap = max(abs(x - y) for x, y in zip(lhs, rhs))
        print(f"s={s} u={u}: |phi^s phi^u - phi^(s+u)| = {gap:.2e}")
    try:
        flow_phi(1.0, (0.0, 1.0, 0.0), a)
    except SingularFlow as exc:
        print(f"m=0: {exc}")


if __name__ == "__main__":
    main()
