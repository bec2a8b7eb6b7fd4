"""Write the in-repo covariance fixtures (printed matrices plus synthetics)."""

from pathlib import Path

from paramcav import fileio
from paramcav.fixtures import bs_state, cm_state, tms_state, vacuum_state

OUT = Path(__file__).resolve().parent.parent / "fixtures"


def main():
    OUT.mkdir(exist_ok=True)
    fileio.write_covariance(OUT / "cm.cov", cm_state(), {"source": "measured CM matrix, as printed"})
    fileio.write_covariance(OUT / "bs.cov", bs_state(), {"source": "measured BS matrix, as printed"})
    fileio.write_covariance(OUT / "vacuum.cov", vacuum_state(), {"source": "three-mode vacuum"})
    fileio.write_covariance(OUT / "tms.cov", tms_state(0.5), {"source": "two-mode squeezed vacuum, r = 0.5"})
    for p in sorted(OUT.glob("*.cov")):
        print(p)


if __name__ == "__main__":
    main()
