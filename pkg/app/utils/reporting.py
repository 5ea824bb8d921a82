"""
CSV and SVG output for sweep records.

CSV columns are fixed: scheme,variable,value,seed,eta,r_D,r_U,objective,iters,ms.
Floats are written with shortest round-trip precision, so parsing the file
recovers the values exactly. Plots are standalone SVG files with one polyline
per scheme, tagged ``id="curve-<scheme>"``.
"""
from pathlib import Path
from typing import Dict, Literal, Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from app.core.logging import logger
from app.schemas.sweep import SweepRecord
from app.utils.sweep import RegionCurve, records_frame

PlotKind = Literal["objective", "region"]

AXIS_LABELS = {
    "bs_ris_distance": "BS-RIS horizontal distance d (m)",
    "eta": "Weighting parameter η",
    "ris_elements": "Number of RIS elements F",
}
RATE_LABEL = "Weighted sum rate (bit/s/Hz)"
DOWNLINK_LABEL = "Downlink rate (bit/s/Hz)"
UPLINK_LABEL = "Uplink rate (bit/s/Hz)"

# Fixed ids and no timestamp keep repeated plots byte-identical
SVG_RC = {"svg.hashsalt": "ris-twoway", "svg.fonttype": "path"}
SVG_METADATA = {"Date": None}


def emit_csv(records: Sequence[SweepRecord], path: Union[str, Path]) -> Path:
    """
    Write records as CSV.

    Raises:
        ValueError: If there are no records
        OSError: If the path cannot be written
    """
    if not records:
        raise ValueError("no records to write")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    records_frame(records).to_csv(path, index=False, lineterminator="\n")
    logger.info(f"Wrote {len(records)} records to {path}")
    return path


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata=SVG_METADATA)
    plt.close(fig)
    logger.info(f"Wrote plot {path}")
    return path


def _objective_plot(records: Sequence[SweepRecord], path: Path) -> Path:
    df = records_frame(records)
    variable = df["variable"].iloc[0]
    medians = df.groupby(["scheme", "value"], sort=True)["objective"].median()

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for scheme in sorted(df["scheme"].unique()):
        curve = medians.loc[scheme]
        ax.plot(curve.index.to_numpy(), curve.to_numpy(), label=scheme, gid=f"curve-{scheme}")
    ax.set_xlabel(AXIS_LABELS.get(variable, variable))
    ax.set_ylabel(RATE_LABEL)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def _region_axes(ax):
    ax.set_xlabel(DOWNLINK_LABEL)
    ax.set_ylabel(UPLINK_LABEL)
    ax.grid(True, alpha=0.3)
    ax.legend()


def _region_plot(records: Sequence[SweepRecord], path: Path) -> Path:
    df = records_frame(records)
    if df["variable"].iloc[0] != "eta":
        raise ValueError("region plots need records of an eta sweep")
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for scheme, group in df.groupby("scheme", sort=True):
        means = group.groupby("value", sort=True)[["r_D", "r_U"]].mean()
        ax.plot(means["r_D"].to_numpy(), means["r_U"].to_numpy(), label=scheme, gid=f"curve-{scheme}")
    _region_axes(ax)
    fig.tight_layout()
    return _save(fig, path)


def emit_plot(records: Sequence[SweepRecord], kind: PlotKind, path: Union[str, Path]) -> Path:
    """
    Write an SVG plot of sweep records.

    Args:
        records: Records of one sweep
        kind: ``objective`` for the median weighted sum rate against the swept
            variable, ``region`` for mean downlink against uplink rate per eta
        path: Output file

    Raises:
        ValueError: If there are no records or the kind does not fit them
    """
    if not records:
        raise ValueError("no records to plot")
    path = Path(path)
    with matplotlib.rc_context(SVG_RC):
        if kind == "objective":
            return _objective_plot(records, path)
        if kind == "region":
            return _region_plot(records, path)
    raise ValueError(f"unknown plot kind: {kind}")


def emit_region_family(regions: Dict[float, Dict[str, RegionCurve]], scheme: str, path: Union[str, Path]) -> Path:
    """One rate-region curve of ``scheme`` per BS-RIS distance."""
    if not regions:
        raise ValueError("no regions to plot")
    path = Path(path)
    with matplotlib.rc_context(SVG_RC):
        fig, ax = plt.subplots(figsize=(6.4, 4.8))
        for distance, curves in sorted(regions.items()):
            curve = curves[scheme]
            ax.plot(curve.r_D, curve.r_U, label=f"{scheme}, d={distance:g} m", gid=f"curve-{scheme}-d{distance:g}")
        _region_axes(ax)
        fig.tight_layout()
        return _save(fig, path)
