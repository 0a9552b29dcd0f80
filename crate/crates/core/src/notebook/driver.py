# Cell execution driver for alttextify.
#
# Reads one JSON request per line on stdin, executes notebook code in a shared
# namespace and answers with one JSON line on the original stdout. Every
# matplotlib figure shown or left open by a cell is serialized into the host
# figure schema consumed by the Rust side and then closed.

import base64
import contextlib
import io
import json
import math
import os
import sys
import traceback

os.environ.setdefault("MPLBACKEND", "Agg")

import matplotlib  # noqa: E402

matplotlib.use("Agg")

import matplotlib.colors as mcolors  # noqa: E402
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.axes import Axes  # noqa: E402
from matplotlib.collections import PathCollection, QuadMesh  # noqa: E402
from matplotlib.contour import ContourSet  # noqa: E402
from matplotlib.patches import Rectangle, Wedge  # noqa: E402
from matplotlib.text import Annotation  # noqa: E402

_PROTOCOL_OUT = sys.stdout
_CAPTURED = []
_PENDING_BOX_DATA = []


def _num(v):
    try:
        f = float(v)
    except (TypeError, ValueError):
        return None
    return f if math.isfinite(f) else None


def _nums(seq):
    return [_num(v) for v in seq]


def _hex(color):
    try:
        return mcolors.to_hex(color)
    except (TypeError, ValueError):
        return None


def _label(artist):
    label = artist.get_label()
    if not label or label.startswith("_"):
        return None
    return str(label)


# -- interception -----------------------------------------------------------

_orig_axhline = Axes.axhline
_orig_axvline = Axes.axvline
_orig_boxplot = Axes.boxplot
_orig_bxp = Axes.bxp
_orig_pie = Axes.pie
_orig_show = plt.show


def _axhline(self, y=0, *args, **kwargs):
    line = _orig_axhline(self, y, *args, **kwargs)
    line._alttext_ref = ("horizontal", _num(y))
    return line


def _axvline(self, x=0, *args, **kwargs):
    line = _orig_axvline(self, x, *args, **kwargs)
    line._alttext_ref = ("vertical", _num(x))
    return line


def _boxplot(self, x, *args, **kwargs):
    import numpy as np

    data = x
    if isinstance(data, np.ndarray) and data.ndim == 2:
        data = [data[:, i] for i in range(data.shape[1])]
    elif isinstance(data, np.ndarray) or (
        len(data) > 0 and not hasattr(data[0], "__len__")
    ):
        data = [data]
    _PENDING_BOX_DATA.append([_nums(np.asarray(d, dtype=float).ravel()) for d in data])
    try:
        return _orig_boxplot(self, x, *args, **kwargs)
    finally:
        if _PENDING_BOX_DATA:
            _PENDING_BOX_DATA.pop()


def _bxp(self, bxpstats, positions=None, *args, **kwargs):
    artists = _orig_bxp(self, bxpstats, positions, *args, **kwargs)
    raw = _PENDING_BOX_DATA[-1] if _PENDING_BOX_DATA else None
    vert = kwargs.get("vert", True)
    orientation = kwargs.get("orientation")
    if orientation is not None:
        vert = orientation == "vertical"
    if vert is None:
        vert = True
    pos = list(positions) if positions is not None else list(range(1, len(bxpstats) + 1))
    boxes = getattr(self, "_alttext_boxes", [])
    for i, st in enumerate(bxpstats):
        boxes.append(
            {
                "position": _num(pos[i]),
                "label": str(st["label"]) if st.get("label") is not None else None,
                "median": _num(st["med"]),
                "q1": _num(st["q1"]),
                "q3": _num(st["q3"]),
                "whisker_low": _num(st["whislo"]),
                "whisker_high": _num(st["whishi"]),
                "fliers": _nums(st.get("fliers", [])),
                "values": raw[i] if raw is not None and i < len(raw) else None,
                "vertical": bool(vert),
            }
        )
    self._alttext_boxes = boxes
    for group in artists.values():
        for a in group:
            a._alttext_internal = True
    return artists


def _pie(self, *args, **kwargs):
    result = _orig_pie(self, *args, **kwargs)
    for group in result[1:]:
        for t in group:
            t._alttext_internal = True
    return result


def _show(*args, **kwargs):
    _capture_open_figures()


Axes.axhline = _axhline
Axes.axvline = _axvline
Axes.boxplot = _boxplot
Axes.bxp = _bxp
Axes.pie = _pie
plt.show = _show


# -- serialization ----------------------------------------------------------


def _axis(ax, which):
    axis = ax.xaxis if which == "x" else ax.yaxis
    get_lim = ax.get_xlim if which == "x" else ax.get_ylim
    get_ticks = ax.get_xticks if which == "x" else ax.get_yticks
    get_labels = ax.get_xticklabels if which == "x" else ax.get_yticklabels
    get_label = ax.get_xlabel if which == "x" else ax.get_ylabel
    get_scale = ax.get_xscale if which == "x" else ax.get_yscale
    lo, hi = get_lim()
    ticks = []
    for pos, text in zip(get_ticks(), get_labels()):
        ticks.append({"position": _num(pos), "label": text.get_text()})
    units = None
    try:
        from matplotlib import category, dates

        conv = axis.get_converter() if hasattr(axis, "get_converter") else axis.converter
        if isinstance(conv, category.StrCategoryConverter):
            units = "category"
        elif isinstance(conv, (dates.DateConverter, dates._SwitchableDateConverter)):
            units = "date"
    except Exception:
        pass
    return {
        "label": get_label() or None,
        "limits": [_num(lo), _num(hi)],
        "scale": get_scale(),
        "ticks": ticks,
        "units": units,
    }


def _image_grid(im):
    import numpy as np

    arr = np.asarray(im.get_array(), dtype=float)
    if arr.ndim == 3:
        arr = arr[..., :3].mean(axis=2)
    left, right, bottom, top = im.get_extent()
    return {
        "kind": "image",
        "values": [_nums(row) for row in arr],
        "extent": [_num(left), _num(right), _num(bottom), _num(top)],
        "origin": im.origin,
    }


def _quadmesh_grid(mesh):
    import numpy as np

    coords = np.asarray(mesh.get_coordinates())
    arr = np.asarray(mesh.get_array(), dtype=float)
    rows, cols = coords.shape[0] - 1, coords.shape[1] - 1
    if arr.ndim == 1 and arr.size == rows * cols:
        arr = arr.reshape(rows, cols)
    return {
        "kind": "quad_mesh",
        "values": [_nums(row) for row in arr],
        "x_edges": _nums(coords[0, :, 0]),
        "y_edges": _nums(coords[:, 0, 1]),
    }


def _contour(cs):
    paths = []
    for path in cs.get_paths():
        polys = []
        current = []
        for verts, code in path.iter_segments(simplify=False):
            if code == 1 and current:
                polys.append(current)
                current = []
            if code != 79:
                current.append([_num(verts[0]), _num(verts[1])])
        if current:
            polys.append(current)
        paths.append(polys)
    return {
        "kind": "contour",
        "levels": _nums(cs.levels),
        "filled": bool(cs.filled),
        "paths": paths,
    }


def _artists(ax, skip_texts):
    out = []
    for line in ax.get_lines():
        if getattr(line, "_alttext_internal", False):
            continue
        ref = getattr(line, "_alttext_ref", None)
        if ref is not None:
            out.append({"kind": "ref_line", "orientation": ref[0], "value": ref[1]})
            continue
        xy = line.get_xydata()
        ls = line.get_linestyle()
        marker = line.get_marker()
        out.append(
            {
                "kind": "line",
                "x": _nums(xy[:, 0]) if len(xy) else [],
                "y": _nums(xy[:, 1]) if len(xy) else [],
                "x_categories": _categories(ax.xaxis, line.get_xdata(orig=True)),
                "label": _label(line),
                "color": _hex(line.get_color()),
                "has_line": ls not in ("None", "none", " ", ""),
                "has_markers": marker not in (None, "None", "none", " ", ""),
            }
        )
    for coll in ax.collections:
        if isinstance(coll, ContourSet):
            out.append(_contour(coll))
        elif isinstance(coll, QuadMesh):
            out.append(_quadmesh_grid(coll))
        elif isinstance(coll, PathCollection):
            offsets = coll.get_offsets()
            fc = coll.get_facecolor()
            out.append(
                {
                    "kind": "points",
                    "offsets": [[_num(p[0]), _num(p[1])] for p in offsets],
                    "label": _label(coll),
                    "color": _hex(fc[0]) if len(fc) else None,
                }
            )
        else:
            out.append({"kind": "other", "name": type(coll).__name__})
    for im in ax.images:
        out.append(_image_grid(im))
    for patch in ax.patches:
        if isinstance(patch, Wedge):
            out.append(
                {
                    "kind": "wedge",
                    "theta1": _num(patch.theta1),
                    "theta2": _num(patch.theta2),
                    "label": _label(patch),
                    "color": _hex(patch.get_facecolor()),
                }
            )
        elif isinstance(patch, Rectangle):
            out.append(
                {
                    "kind": "rectangle",
                    "x": _num(patch.get_x()),
                    "y": _num(patch.get_y()),
                    "width": _num(patch.get_width()),
                    "height": _num(patch.get_height()),
                    "label": _label(patch),
                    "color": _hex(patch.get_facecolor()),
                }
            )
        else:
            out.append({"kind": "other", "name": type(patch).__name__})
    for box in getattr(ax, "_alttext_boxes", []):
        out.append(dict(box, kind="box"))
    for text in ax.texts:
        if getattr(text, "_alttext_internal", False) or id(text) in skip_texts:
            continue
        content = text.get_text()
        if not content.strip():
            continue
        if isinstance(text, Annotation):
            pos = text.xy
        else:
            pos = text.get_position()
        out.append(
            {
                "kind": "annotation",
                "text": content,
                "position": [_num(pos[0]), _num(pos[1])],
            }
        )
    return out


def _categories(axis, raw):
    try:
        from matplotlib import category

        conv = axis.get_converter() if hasattr(axis, "get_converter") else axis.converter
        if isinstance(conv, category.StrCategoryConverter):
            return [str(v) for v in raw]
    except Exception:
        pass
    return None


def _legend_labels(ax):
    legend = ax.get_legend()
    if legend is None:
        return []
    return [t.get_text() for t in legend.get_texts()]


def serialize_figure(fig):
    fig.canvas.draw()
    colorbars = {}
    for ax in fig.axes:
        cb = getattr(ax, "_colorbar", None)
        if cb is None:
            continue
        parent = getattr(cb.mappable, "axes", None)
        if parent is None:
            continue
        label = cb.ax.get_ylabel() if cb.orientation == "vertical" else cb.ax.get_xlabel()
        colorbars[id(parent)] = {
            "label": label or None,
            "vmin": _num(cb.norm.vmin),
            "vmax": _num(cb.norm.vmax),
            "scale": "log" if isinstance(cb.norm, mcolors.LogNorm) else "linear",
        }
    skip_texts = set()
    for ax in fig.axes:
        for coll in ax.collections:
            if isinstance(coll, ContourSet):
                for t in getattr(coll, "labelTexts", []):
                    skip_texts.add(id(t))
    main_axes = [ax for ax in fig.axes if getattr(ax, "_colorbar", None) is None]
    axes = []
    for i, ax in enumerate(main_axes):
        twin_of = None
        for j in range(i):
            other = main_axes[j]
            same_box = other.get_position().bounds == ax.get_position().bounds
            shared = other.get_shared_x_axes().joined(other, ax) or other.get_shared_y_axes().joined(other, ax)
            if same_box and shared:
                twin_of = j
                break
        title = ax.get_title() or ax.get_title(loc="left") or ax.get_title(loc="right")
        axes.append(
            {
                "title": title or None,
                "x_axis": _axis(ax, "x"),
                "y_axis": _axis(ax, "y"),
                "polar": ax.name == "polar",
                "artists": _artists(ax, skip_texts),
                "legend_labels": _legend_labels(ax),
                "colorbar": colorbars.get(id(ax)),
                "twin_of": twin_of,
            }
        )
    suptitle = fig._suptitle.get_text() if getattr(fig, "_suptitle", None) is not None else None
    buf = io.BytesIO()
    fig.savefig(buf, format="png", dpi=fig.dpi)
    return {
        "suptitle": suptitle or None,
        "axes": axes,
        "dpi": _num(fig.dpi),
        "png": base64.b64encode(buf.getvalue()).decode("ascii"),
    }


def _capture_open_figures():
    for num in plt.get_fignums():
        fig = plt.figure(num)
        try:
            _CAPTURED.append(serialize_figure(fig))
        except Exception as exc:  # pragma: no cover - reported to the caller
            _CAPTURED.append({"serialize_error": repr(exc)})
        plt.close(fig)


def _strip_magics(code):
    lines = []
    for line in code.splitlines():
        stripped = line.lstrip()
        if stripped.startswith("%") or stripped.startswith("!"):
            lines.append("")
        else:
            lines.append(line)
    return "\n".join(lines)


def run_cell(code, namespace):
    del _CAPTURED[:]
    out, err = io.StringIO(), io.StringIO()
    error = None
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            exec(compile(_strip_magics(code), "<cell>", "exec"), namespace)
        except BaseException as exc:  # noqa: B902 - user code may raise anything
            error = {
                "ename": type(exc).__name__,
                "evalue": str(exc),
                "traceback": traceback.format_exception(type(exc), exc, exc.__traceback__),
            }
        _capture_open_figures()
    return {
        "stdout": out.getvalue(),
        "stderr": err.getvalue(),
        "error": error,
        "figures": list(_CAPTURED),
    }


def main():
    namespace = {"__name__": "__main__"}
    for raw in sys.stdin:
        raw = raw.strip()
        if not raw:
            continue
        request = json.loads(raw)
        if request.get("op") == "shutdown":
            break
        reply = run_cell(request.get("code", ""), namespace)
        _PROTOCOL_OUT.write(json.dumps(reply, allow_nan=False) + "\n")
        _PROTOCOL_OUT.flush()


if __name__ == "__main__":
    main()
