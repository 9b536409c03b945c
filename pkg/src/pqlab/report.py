"""Figures and CSV tables summarising the library's behaviour.

Every figure is written next to a CSV holding exactly the plotted numbers.
All randomness comes from the seed, so two reports with the same seed are
identical.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import agility, dilithium, kyber, lattice, shor  # noqa: E402
from .rng import derive_rng  # noqa: E402

_PNG_META = {"Software": None}


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _save(fig, path: Path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata=_PNG_META)
    plt.close(fig)


def shor_figure(out: Path) -> list[Path]:
    cases = [(7, 15), (2, 21)]
    rows = []
    fig, axes = plt.subplots(len(cases), 1, figsize=(7, 5))
    for ax, (a, n) in zip(axes, cases):
        dist = shor.simulate_quantum_part(a, n)
        for y in range(dist.N):
            rows.append((a, n, y, f"{dist.probs[y]:.12f}"))
        ax.vlines(np.arange(dist.N), 0, dist.probs, lw=0.8)
        ax.set_title(f"a = {a}, n = {n}, N = {dist.N}")
        ax.set_xlabel("measured y")
        ax.set_ylabel("probability")
    png, table = out / "shor_distribution.png", out / "shor_distribution.csv"
    _save(fig, png)
    _write_csv(table, ("a", "n", "y", "probability"), rows)
    return [png, table]


def kyber_figure(out: Path, seed: int, count: int = 20000) -> list[Path]:
    batch = kyber.batch_trials(kyber.TOY, count, seed)
    norms, ok = batch.noise_inf(), batch.success()
    rows = []
    for v in range(int(norms.max()) + 1):
        sel = norms == v
        if sel.any():
            rows.append((v, int(sel.sum()), int(ok[sel].sum())))
    fig, ax = plt.subplots(figsize=(6, 3.5))
    xs = [r[0] for r in rows]
    ax.bar(xs, [r[2] / r[1] for r in rows], color="tab:blue")
    ax.axvline(kyber.TOY.q / 4, color="tab:red", ls="--", label="q/4")
    ax.set_xlabel("centered noise infinity norm")
    ax.set_ylabel("decryption success rate")
    ax.set_title(f"toy parameters, {count} random instances")
    ax.legend()
    png, table = out / "kyber_noise.png", out / "kyber_noise.csv"
    _save(fig, png)
    _write_csv(table, ("noise_inf", "trials", "successes"), rows)
    return [png, table]


def lattice_figure(out: Path, seed: int, bases: int = 40, max_steps: int = 12) -> list[Path]:
    rng = derive_rng(seed, "report:lattice")
    good = [lattice.random_good_basis(2, rng) for _ in range(bases)]
    rows = []
    for steps in range(max_steps + 1):
        vals = [lattice.defect(lattice.transform_basis(B, lattice.random_unimodular(2, rng, steps))) for B in good]
        rows.append((steps, f"{np.mean(vals):.6f}", f"{np.median(vals):.6f}"))
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.semilogy([r[0] for r in rows], [float(r[1]) for r in rows], "o-", label="mean")
    ax.semilogy([r[0] for r in rows], [float(r[2]) for r in rows], "s--", label="median")
    ax.set_xlabel("elementary operations in the unimodular transform")
    ax.set_ylabel("orthogonality defect")
    ax.legend()
    png, table = out / "lattice_defect.png", out / "lattice_defect.csv"
    _save(fig, png)
    _write_csv(table, ("steps", "mean_defect", "median_defect"), rows)
    return [png, table]


def dilithium_figure(out: Path, seed: int, signatures: int = 300) -> list[Path]:
    rng = derive_rng(seed, "report:dilithium")
    pub, priv = dilithium.keygen(dilithium.TOY, rng)
    retries = [dilithium.sign(priv, pub, i.to_bytes(4, "big"), rng).retries for i in range(signatures)]
    counts = np.bincount(retries)
    rows = [(k, int(c)) for k, c in enumerate(counts)]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar([r[0] for r in rows], [r[1] for r in rows], color="tab:green")
    ax.set_xlabel("extra attempts before the signature verified")
    ax.set_ylabel("signatures")
    ax.set_title(f"toy parameters, {signatures} signatures")
    png, table = out / "dilithium_retries.png", out / "dilithium_retries.csv"
    _save(fig, png)
    _write_csv(table, ("retries", "signatures"), rows)
    return [png, table]


def mosca_figure(out: Path) -> list[Path]:
    rows = []
    for label, mig, conf, crqc in agility.SCENARIOS:
        v = agility.mosca_evaluate(agility.MoscaInput(mig, conf, crqc))
        rows.append((label, mig, conf, crqc, v.slack, v.label))
    fig, ax = plt.subplots(figsize=(6, 3))
    colors = ["tab:red" if r[4] < 0 else "tab:green" for r in rows]
    ax.barh([r[0] for r in rows], [r[4] for r in rows], color=colors)
    ax.axvline(0, color="black", lw=0.8)
    ax.set_xlabel("slack in years (crqc - migrate - confi)")
    png, table = out / "mosca.png", out / "mosca.csv"
    _save(fig, png)
    _write_csv(table, ("scenario", "t_migrate", "t_confi", "t_crqc", "slack", "verdict"), rows)
    return [png, table]


def write_report(out_dir, seed: int) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files: list[Path] = []
    files += shor_figure(out)
    files += kyber_figure(out, seed)
    files += lattice_figure(out, seed)
    files += dilithium_figure(out, seed)
    files += mosca_figure(out)
    return files
