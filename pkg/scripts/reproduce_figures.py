"""Regenerate the lattice drawings, conflict reports and the Chisholm listing."""

import argparse
from dataclasses import dataclass
from pathlib import Path

from knormas.cli import run


@dataclass
class FigureConfig:
    out_dir: Path = Path("figures")
    bound: int = 6


JOBS = [
    ("fig3-lattice.dot", ["lattice", "fig3", "--format", "dot"]),
    ("fig3-lattice.txt", ["lattice", "fig3"]),
    ("fig4-lattice.dot", ["lattice", "fig4", "--format", "dot"]),
    ("fig4-lattice.txt", ["lattice", "fig4"]),
    ("fig2-conflicts.txt", ["conflicts", "fig2-misbehaving"]),
    ("fig3-conflicts.txt", ["conflicts", "fig3"]),
    ("fig4-conflicts.txt", ["conflicts", "fig4"]),
    ("fig4-conflicts.json", ["conflicts", "fig4", "--format", "json"]),
    ("chisholm.txt", ["chisholm"]),
    ("chisholm-drop4.txt", ["chisholm", "--drop-premise", "4"]),
]


def main(cfg: FigureConfig) -> None:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    for name, argv in JOBS:
        if argv[0] != "chisholm":
            argv = argv + ["--bound", str(cfg.bound)]
        stdout, stderr, status = run(argv)
        if status == 2:
            raise SystemExit(f"{' '.join(argv)}: {stderr.strip()}")
        (cfg.out_dir / name).write_text(stdout, encoding="utf-8")
        print(f"{name:24} exit {status}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", type=Path, default=FigureConfig.out_dir)
    ap.add_argument("--bound", type=int, default=FigureConfig.bound)
    args = ap.parse_args()
    main(FigureConfig(args.out_dir, args.bound))
