"""Render a trace into a single self-contained HTML page.

The page embeds the canonical trace JSON verbatim (the serializer escapes
"<", so the document is safe inside a script element) plus a small scrub-only
viewer: step, play, and a slider. Quiz mode needs the live server and is not
part of the export.
"""

from __future__ import annotations

from pathlib import Path

from .trace import Trace, serialize_trace

_JSON_MARKER = "__DPKIT_TRACE_JSON__"

PAGE_TEMPLATE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>dpkit trace viewer</title>
<style>
  body { font-family: system-ui, sans-serif; margin: 2rem; color: #222; }
  h1 { font-size: 1.2rem; }
  table { border-collapse: collapse; margin: 1rem 0; }
  td, th { border: 1px solid #999; min-width: 2.6rem; height: 2rem;
           text-align: center; padding: 0 .4rem; font-variant-numeric: tabular-nums; }
  th { background: #f2f2f2; font-weight: 600; }
  td.tb { outline: 3px solid #222; outline-offset: -3px; }
  #controls { display: flex; gap: .5rem; align-items: center; }
  #controls button { font-size: 1rem; padding: .2rem .7rem; }
  #scrub { flex: 1; max-width: 24rem; }
  #annotation { min-height: 1.4rem; font-style: italic; color: #444; margin-top: .6rem; }
  #legend { display: flex; gap: 1rem; margin-top: 1rem; font-size: .85rem; }
  #legend span { padding: .15rem .5rem; border-radius: .2rem; color: #fff; }
</style>
</head>
<body>
<h1 id="title"></h1>
<div id="controls">
  <button id="first" title="first frame">&#9198;</button>
  <button id="prev" title="step back">&#9664;</button>
  <button id="play" title="play/pause">&#9654;</button>
  <button id="next" title="step forward">&#9654;&#9654;</button>
  <input type="range" id="scrub" min="1" value="1">
  <span id="counter"></span>
</div>
<div id="grid"></div>
<div id="annotation"></div>
<div id="legend"></div>
<script type="application/json" id="trace-data">__DPKIT_TRACE_JSON__</script>
<script>
(function () {
  "use strict";
  var trace = JSON.parse(document.getElementById("trace-data").textContent);
  var frames = trace.frames;
  var is2d = trace.shape.length === 2;
  var rows = is2d ? trace.shape[0] : 1;
  var cols = is2d ? trace.shape[1] : trace.shape[0];
  var t = Math.min(1, frames.length);
  var timer = null;

  document.getElementById("title").textContent =
    trace.name + " - " + frames.length + " frames";
  document.getElementById("scrub").max = Math.max(frames.length, 1);

  function snapshot(upto) {
    var grid = [];
    for (var r = 0; r < rows; r++) { grid.push(new Array(cols).fill(null)); }
    for (var f = 0; f < upto; f++) {
      frames[f].deltas.forEach(function (d) {
        var idx = d[0];
        if (is2d) { grid[idx[0]][idx[1]] = d[1]; } else { grid[0][idx[0]] = d[1]; }
      });
    }
    return grid;
  }

  function key(idx) { return idx.join(","); }
  function cellKey(r, c) { return is2d ? r + "," + c : String(c); }

  function render() {
    var grid = snapshot(t);
    var frame = frames[t - 1];
    var written = {}, read = {}, maxmin = {}, tb = {};
    if (frame) {
      frame.written.forEach(function (i) { written[key(i)] = true; });
      frame.read.forEach(function (i) { read[key(i)] = true; });
      frame.maxmin.forEach(function (i) { maxmin[key(i)] = true; });
    }
    if (trace.traceback && t === frames.length) {
      trace.traceback.forEach(function (i) { tb[key(i)] = true; });
    }
    var html = "<table>";
    if (trace.labels && trace.labels.cols) {
      html += "<tr>" + (trace.labels.rows ? "<th></th>" : "");
      trace.labels.cols.forEach(function (s) { html += "<th>" + esc(s) + "</th>"; });
      html += "</tr>";
    }
    for (var r = 0; r < rows; r++) {
      html += "<tr>";
      if (trace.labels && trace.labels.rows) { html += "<th>" + esc(trace.labels.rows[r]) + "</th>"; }
      for (var c = 0; c < cols; c++) {
        var k = cellKey(r, c);
        var style = "";
        if (written[k]) { style = "background:#" + trace.colors.WRITE + ";color:#fff"; }
        else if (maxmin[k]) { style = "background:#" + trace.colors.MAXMIN + ";color:#fff"; }
        else if (read[k]) { style = "background:#" + trace.colors.READ + ";color:#fff"; }
        var v = grid[r][c];
        html += "<td" + (tb[k] ? " class=\\"tb\\"" : "") + " style=\\"" + style + "\\">" +
                (v === null ? "" : v) + "</td>";
      }
      html += "</tr>";
    }
    html += "</table>";
    document.getElementById("grid").innerHTML = html;
    document.getElementById("counter").textContent =
      frames.length ? "frame " + t + " / " + frames.length : "empty trace";
    document.getElementById("annotation").textContent = (frame && frame.annotation) || "";
    document.getElementById("scrub").value = t;
  }

  function esc(s) {
    return String(s).replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
  }

  function seek(next) {
    if (!frames.length) { return; }
    t = Math.max(1, Math.min(frames.length, next));
    render();
  }

  function stopPlaying() {
    if (timer) { clearInterval(timer); timer = null; }
    document.getElementById("play").innerHTML = "&#9654;";
  }

  document.getElementById("first").onclick = function () { stopPlaying(); seek(1); };
  document.getElementById("prev").onclick = function () { stopPlaying(); seek(t - 1); };
  document.getElementById("next").onclick = function () { stopPlaying(); seek(t + 1); };
  document.getElementById("scrub").oninput = function () { stopPlaying(); seek(parseInt(this.value, 10)); };
  document.getElementById("play").onclick = function () {
    if (timer) { stopPlaying(); return; }
    this.innerHTML = "&#9646;&#9646;";
    timer = setInterval(function () {
      if (t >= frames.length) { stopPlaying(); return; }
      seek(t + 1);
    }, 1000);
  };

  var legend = document.getElementById("legend");
  ["READ", "WRITE", "MAXMIN"].forEach(function (kind) {
    var span = document.createElement("span");
    span.style.background = "#" + trace.colors[kind];
    span.textContent = kind;
    legend.appendChild(span);
  });

  render();
})();
</script>
</body>
</html>
"""


def render_page(trace_json: bytes) -> bytes:
    """Inline canonical trace bytes into the viewer page."""
    return PAGE_TEMPLATE.replace(_JSON_MARKER, trace_json.decode("ascii")).encode("utf-8")


def export_static(trace: Trace, path) -> Path:
    """Write the self-contained viewer page for ``trace`` to ``path``."""
    out = Path(path)
    if out.is_dir():
        raise IsADirectoryError(f"{out} is a directory; pass a file path")
    out.write_bytes(render_page(serialize_trace(trace)))
    return out
