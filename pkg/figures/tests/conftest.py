"""Shared fixtures: real input files produced by the simulation CLI.

The figures package consumes the simulator only through its command-line
interface and file formats, so the fixtures shell out to `python -m osee.cli`
exactly as a user would.
"""

import subprocess
import sys

import pytest


def run_cli(*args: str) -> None:
    cmd = [sys.executable, "-m", "osee.cli", *args]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"{' '.join(cmd)} failed ({proc.returncode}): {proc.stderr}")


@pytest.fixture(scope="session")
def artifacts(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli_outputs")
    paths = {
        "trace": str(root / "trace.csv"),
        "fit": str(root / "fit.json"),
        "phase": str(root / "phase.csv"),
        "dispersion": str(root / "disp.csv"),
        "points": str(root / "disp.json"),
        "manifest": str(root / "ens.manifest.json"),
    }
    run_cli("trace", "--n", "64", "--gamma", "0.5", "--h", "0.25",
            "--bc", "periodic", "--halve", "--operator", "F",
            "--t", "1:40:log24", "--out", paths["trace"])
    run_cli("fit", "--trace", paths["trace"], "--t-min", "2", "--t-max", "30",
            "--out", paths["fit"])
    run_cli("phase-diagram", "--n", "8", "--t", "1.0",
            "--gamma", "0.2:1.2:0.2", "--h", "0.1:1.5:0.2",
            "--out", paths["phase"])
    run_cli("dispersion", "--gamma", "0.5", "--h", "0.25", "--grid", "1024",
            "--out", paths["dispersion"], "--json", paths["points"])
    run_cli("disorder", "--n", "16", "--gamma", "0.2", "--h", "0.0",
            "--epsilons", "0.3,0.8", "--r", "3", "--seed", "5",
            "--t", "0.5:40:log16", "--out", str(root / "ens"))
    return paths
