import init, { max_height, error_curve, histogram, char_fn } from "./pkg/ztl_web.js";

const PAD = { left: 64, right: 12, top: 12, bottom: 28 };

function frame(canvas, xs, ys) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const xlo = Math.min(...xs), xhi = Math.max(...xs);
  let ylo = Math.min(...ys), yhi = Math.max(...ys);
  if (ylo === yhi) { ylo -= 1; yhi += 1; }
  const sx = (x) => PAD.left + ((x - xlo) / (xhi - xlo || 1)) * (w - PAD.left - PAD.right);
  const sy = (y) => h - PAD.bottom - ((y - ylo) / (yhi - ylo)) * (h - PAD.top - PAD.bottom);
  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#444";
  ctx.font = "11px system-ui";
  ctx.strokeRect(PAD.left, PAD.top, w - PAD.left - PAD.right, h - PAD.top - PAD.bottom);
  ctx.fillText(yhi.toPrecision(3), 4, PAD.top + 8);
  ctx.fillText(ylo.toPrecision(3), 4, h - PAD.bottom);
  ctx.fillText(xlo.toPrecision(4), PAD.left, h - 8);
  const right = xhi.toPrecision(4);
  ctx.fillText(right, w - PAD.right - ctx.measureText(right).width, h - 8);
  if (ylo < 0 && yhi > 0) {
    ctx.strokeStyle = "#ddd";
    ctx.beginPath();
    ctx.moveTo(PAD.left, sy(0));
    ctx.lineTo(w - PAD.right, sy(0));
    ctx.stroke();
  }
  return { ctx, sx, sy };
}

function line(plot, xs, ys, colour, dash = []) {
  const { ctx, sx, sy } = plot;
  ctx.strokeStyle = colour;
  ctx.setLineDash(dash);
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(sx(x), sy(ys[i])) : ctx.moveTo(sx(x), sy(ys[i]))));
  ctx.stroke();
  ctx.setLineDash([]);
}

function read(fieldset) {
  const v = {};
  for (const input of fieldset.querySelectorAll("input")) v[input.name] = Number(input.value);
  return v;
}

function wire(id, run) {
  const fs = document.getElementById(id);
  const stats = fs.querySelector(".stats");
  const go = () => {
    stats.classList.remove("error");
    const t0 = performance.now();
    try {
      const text = run(read(fs), fs.querySelector("canvas"));
      stats.textContent = `${text}\n(${(performance.now() - t0).toFixed(0)} ms)`;
    } catch (e) {
      stats.classList.add("error");
      stats.textContent = String(e.message ?? e);
    }
  };
  fs.querySelector("button").addEventListener("click", go);
  go();
}

function plotCurve(v, canvas) {
  const c = JSON.parse(error_curve(v.k, v.t, v.ymin, v.ymax, v.n));
  line(frame(canvas, c.y, c.value), c.y, c.value, "#1f5fa8");
  return `T used ${c.t_used.toFixed(3)} with ${c.n_zeros} zeros`;
}

function plotHistogram(v, canvas) {
  const h = JSON.parse(histogram(v.k, v.t, v.ymax, v.bins));
  const plot = frame(canvas, h.bin_edges, [0, ...h.counts]);
  const { ctx, sx, sy } = plot;
  ctx.fillStyle = "#7aa6d6";
  h.counts.forEach((c, i) => {
    const x0 = sx(h.bin_edges[i]), x1 = sx(h.bin_edges[i + 1]);
    ctx.fillRect(x0, sy(c), Math.max(1, x1 - x0 - 1), sy(0) - sy(c));
  });
  return [
    `n ${h.n}, T used ${h.t_used.toFixed(3)} with ${h.n_zeros} zeros`,
    `mean ${h.mean.toExponential(4)}  std ${h.std.toExponential(4)}  skewness ${h.skewness.toFixed(4)}`,
    `unimodal ${h.unimodal}`,
  ].join("\n");
}

function plotCharFn(v, canvas) {
  const c = JSON.parse(char_fn(v.k, v.t, v.ymax, v.fmax, v.nf));
  const ys = [...c.empirical_re, ...c.bessel_modulus, ...c.bessel_as_written_re];
  const plot = frame(canvas, c.t, ys);
  line(plot, c.t, c.empirical_re, "#222");
  line(plot, c.t, c.bessel_modulus, "#1f5fa8", [6, 3]);
  line(plot, c.t, c.bessel_as_written_re, "#c0392b", [2, 3]);
  return [
    `black: Re of the empirical function; blue: Π J0(2|c|t); red: Re Π J0(2ct)  (${c.n_zeros} zeros)`,
    `max gap: modulus ${c.max_gap_modulus.toExponential(3)}, complex argument ${c.max_gap_as_written.toExponential(3)}`,
  ].join("\n");
}

const status = document.getElementById("status");
try {
  await init();
  const t0 = performance.now();
  const top = max_height();
  status.textContent = `Zeros up to height ${top.toFixed(1)} ready in ${(performance.now() - t0).toFixed(0)} ms.`;
  wire("curve", plotCurve);
  wire("histogram", plotHistogram);
  wire("charfn", plotCharFn);
} catch (e) {
  status.textContent = `Failed to load: ${e.message ?? e}`;
  status.classList.add("error");
}
