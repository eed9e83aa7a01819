"""Compare closed overlap formulas in both phase conventions with the
quadrature CPT pairing, for the built-in state pairs on both models."""

from ptcoh import verify as V
from ptcoh.model import MODEL_A, MODEL_B


def main():
    for name, m in (("A", MODEL_A), ("B", MODEL_B)):
        rep = V.check_overlap_consistency(m)
        print(f"model {name}: residual {rep.residual:.3e}  passed={rep.passed}")
        for row in rep.details:
            family, bra, ket, series, quad, _, conj_gap = row
            print(f"  {family:8s} {bra} | {ket}")
            print(f"      series     {series:.15f}")
            print(f"      quadrature {quad:.15f}")
            print(f"      conjugated form off by {conj_gap:.3e}")


if __name__ == "__main__":
    main()
