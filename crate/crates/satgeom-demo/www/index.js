// Static page driver: no framework, plain canvas drawing over the three
// wasm entry points. Build the wasm package into ./pkg first (see README).

import init, { construct_demo, bounds_curves, threshold_curve } from "./pkg/satgeom_demo.js";

const $ = (id) => document.getElementById(id);

function parseOrError(text, statusEl) {
  const data = JSON.parse(text);
  if (data.error) {
    statusEl.textContent = `error: ${data.error}`;
    return null;
  }
  return data;
}

// --- construction & coverage map -----------------------------------------

function drawPlane(data) {
  const canvas = $("plane");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const n = data.points;
  const inSet = new Set(data.set);
  const maxM = Math.max(1, ...data.coverage);
  // Sunflower layout: index -> golden-angle spiral, dense and overlap-free.
  const cx = canvas.width / 2, cy = canvas.height / 2;
  const rmax = Math.min(cx, cy) - 14;
  const golden = Math.PI * (3 - Math.sqrt(5));
  const dot = Math.max(1.6, Math.min(6, 220 / Math.sqrt(n)));
  for (let i = 0; i < n; i++) {
    const r = rmax * Math.sqrt((i + 0.5) / n);
    const a = i * golden;
    const x = cx + r * Math.cos(a), y = cy + r * Math.sin(a);
    const m = data.coverage[i];
    let fill;
    if (inSet.has(i)) {
      fill = "#1d1d1d";
    } else if (m >= data.mu) {
      const t = Math.min(1, m / maxM);
      const g = Math.round(158 - 70 * t);
      fill = `rgb(46, ${g}, 68)`;
    } else {
      fill = "#d43d3d";
    }
    ctx.beginPath();
    ctx.arc(x, y, inSet.has(i) ? dot * 1.5 : dot, 0, 2 * Math.PI);
    ctx.fillStyle = fill;
    ctx.fill();
  }
}

function runConstruct() {
  const q = Number($("q").value);
  const mu = Number($("mu").value);
  const c = Number($("c").value);
  const seed = Number($("seed").value);
  const status = $("status");
  status.textContent = "sampling…";
  setTimeout(() => {
    const data = parseOrError(construct_demo(q, c, mu, seed), status);
    if (!data) return;
    status.textContent =
      `q=${q}, μ=${data.mu}: |S| = ${data.size} (w = ${data.w}), ` +
      `bound ${data.bound.toFixed(2)}, trials ${data.trials}, ` +
      `verified: ${data.verified}` +
      (data.range_ok ? "" : " — outside the proved range condition");
    drawPlane(data);
  }, 10);
}

// --- generic axes + polyline plotting -------------------------------------

function plotAxes(ctx, W, H, pad, xmax, ymax, ylabel) {
  ctx.clearRect(0, 0, W, H);
  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.moveTo(pad, 10); ctx.lineTo(pad, H - pad); ctx.lineTo(W - 10, H - pad);
  ctx.stroke();
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
  ctx.fillText("q", W - 22, H - pad + 16);
  ctx.fillText(ylabel, 8, 14);
  for (let i = 1; i <= 4; i++) {
    const y = H - pad - (i / 4) * (H - pad - 16);
    ctx.fillText((ymax * i / 4).toFixed(0), 4, y + 4);
    const xq = Math.round(xmax * i / 4);
    const x = pad + (i / 4) * (W - pad - 16);
    ctx.fillText(String(xq), x - 8, H - pad + 16);
  }
}

function polyline(ctx, pts, W, H, pad, xmax, ymax, color, dashed = false) {
  ctx.strokeStyle = color;
  ctx.lineWidth = 1.8;
  ctx.setLineDash(dashed ? [6, 4] : []);
  ctx.beginPath();
  let started = false;
  for (const [qx, v] of pts) {
    if (v === null || v === undefined) { continue; }
    const x = pad + (qx / xmax) * (W - pad - 16);
    const y = H - pad - Math.min(1, v / ymax) * (H - pad - 16);
    if (started) { ctx.lineTo(x, y); } else { ctx.moveTo(x, y); started = true; }
  }
  ctx.stroke();
  ctx.setLineDash([]);
}

// --- bound curves ----------------------------------------------------------

function runCurves() {
  const mu = Number($("curve-mu").value);
  const qmax = Number($("curve-qmax").value);
  const status = $("curve-status");
  const data = parseOrError(bounds_curves(qmax, mu), status);
  if (!data) return;
  const canvas = $("curves");
  const ctx = canvas.getContext("2d");
  const rows = data.rows;
  const ys = rows.flatMap(r => [r.bound, r.prior_3sqrt2, r.prior_66sqrt])
    .filter(v => v !== null && v !== undefined);
  const ymax = Math.max(...ys) * 1.05;
  plotAxes(ctx, canvas.width, canvas.height, 46, qmax, ymax, "size");
  polyline(ctx, rows.map(r => [r.q, r.bound]), canvas.width, canvas.height, 46, qmax, ymax, "#2266cc");
  if (mu === 1) {
    polyline(ctx, rows.map(r => [r.q, r.prior_3sqrt2]), canvas.width, canvas.height, 46, qmax, ymax, "#cc7722", true);
    status.textContent = "blue: 2√((q+1)ln(q+1))+2 — dashed orange: prior 3√2·√(q ln q)";
  } else {
    polyline(ctx, rows.map(r => [r.q, r.prior_66sqrt]), canvas.width, canvas.height, 46, qmax, ymax, "#cc7722", true);
    status.textContent = `blue: 2Dμ√((q+1)ln(q+1))+2 for μ=${mu} — dashed orange: prior 66√(μq ln q)`;
  }
}

// --- threshold scan ----------------------------------------------------------

function runThreshold() {
  const [mu, d] = $("th-mu").value.split(",").map(Number);
  const qmax = Number($("th-qmax").value);
  const status = $("threshold-status");
  const data = parseOrError(threshold_curve(mu, d, qmax), status);
  if (!data) return;
  const canvas = $("threshold");
  const ctx = canvas.getContext("2d");
  const ymax = 3;
  plotAxes(ctx, canvas.width, canvas.height, 46, qmax, ymax, "(q+1)²π");
  // The guarantee line at 1.
  const yOne = canvas.height - 46 - (1 / ymax) * (canvas.height - 46 - 16);
  ctx.strokeStyle = "#aaa";
  ctx.setLineDash([3, 3]);
  ctx.beginPath(); ctx.moveTo(46, yOne); ctx.lineTo(canvas.width - 16, yOne); ctx.stroke();
  ctx.setLineDash([]);
  polyline(ctx, data.points.map(p => [p.q, Math.min(p.value, ymax)]),
    canvas.width, canvas.height, 46, qmax, ymax, "#2266cc");
  // Prime powers as dots, colored by side of the threshold.
  for (const p of data.points) {
    if (!p.prime_power) continue;
    const x = 46 + (p.q / qmax) * (canvas.width - 46 - 16);
    const y = canvas.height - 46 - Math.min(1, Math.min(p.value, ymax) / ymax) * (canvas.height - 46 - 16);
    ctx.beginPath();
    ctx.arc(x, y, 2.5, 0, 2 * Math.PI);
    ctx.fillStyle = p.value < 1 ? "#2e9e44" : "#d43d3d";
    ctx.fill();
  }
  status.textContent = data.q_star
    ? `holds for every prime power q ≥ ${data.q_star} (last failing prime power: ${data.last_fail})`
    : "no crossing below q max";
}

init().then(() => {
  $("status").textContent = "ready";
  $("construct").addEventListener("click", runConstruct);
  $("draw-curves").addEventListener("click", runCurves);
  $("draw-threshold").addEventListener("click", runThreshold);
  runConstruct();
  runCurves();
  runThreshold();
});
