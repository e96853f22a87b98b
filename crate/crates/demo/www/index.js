import init, { Demo } from "./pkg/polyedge_demo.js";

const $ = (id) => document.getElementById(id);
const palette = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];
const color = (l) => palette[l % palette.length];

let demo, points;

function drawPoints(canvas, labels) {
  const ctx = canvas.getContext("2d");
  const s = canvas.width / 3;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#eee";
  for (let i = 1; i < 3; i++) {
    ctx.beginPath(); ctx.moveTo(i * s, 0); ctx.lineTo(i * s, canvas.height); ctx.stroke();
    ctx.beginPath(); ctx.moveTo(0, i * s); ctx.lineTo(canvas.width, i * s); ctx.stroke();
  }
  // cells are tight, so spread each cell's points a little for visibility
  points.forEach(([x, y], i) => {
    const cx = Math.floor(x) + 0.5, cy = Math.floor(y) + 0.5;
    const px = (cx + (x - cx) * 6) * s, py = canvas.height - (cy + (y - cy) * 6) * s;
    ctx.fillStyle = color(labels[i]);
    ctx.beginPath(); ctx.arc(px, py, 3, 0, 2 * Math.PI); ctx.fill();
  });
}

function fmt(v) { return v.toFixed(3); }

function recluster() {
  const theta = +$("theta").value, sharp = +$("sharp").value;
  $("theta-v").textContent = theta;
  $("sharp-v").textContent = sharp;
  const r = JSON.parse(demo.cluster(theta, sharp));
  drawPoints($("points"), r.labels);
  $("cluster-info").textContent =
    `clusters    ${r.clusters}\nmodularity  ${fmt(r.modularity)}\n\nVI to rows  ${fmt(r.vi.rows)}\n` +
    `VI to cols  ${fmt(r.vi.cols)}\nVI to cells ${fmt(r.vi.cells)}\n\nweights\n` +
    r.alpha.map((a, t) => `  ${(t * 15).toString().padStart(3)}°  ${"#".repeat(Math.round(a * 30))}`).join("\n");
  holding();
}

function landscape() {
  $("status").textContent = "sampling…";
  setTimeout(() => {
    const r = JSON.parse(demo.landscape(+$("samples").value, +$("seed").value));
    const c = $("heat"), ctx = c.getContext("2d"), n = r.matrix.length, cell = c.width / n;
    const max = r.ln_n;
    ctx.clearRect(0, 0, c.width, c.height);
    r.matrix.forEach((row, i) => row.forEach((d, j) => {
      const g = Math.round(255 * Math.min(1, d / max));
      ctx.fillStyle = `rgb(${g},${g},${255 - g / 2})`;
      ctx.fillRect(j * cell, i * cell, Math.ceil(cell), Math.ceil(cell));
    }));
    // meta-cluster strip along the top edge
    r.meta.forEach((m, i) => {
      ctx.fillStyle = m === null ? "#000" : color(m);
      ctx.fillRect(i * cell, 0, Math.ceil(cell), 4);
    });
    const lines = r.representatives.map((p, i) =>
      `${i + 1}. meta ${p.meta}: ${p.clusters} clusters, score ${fmt(p.score)}\n` +
      `   VI rows ${fmt(p.vi.rows)} cols ${fmt(p.vi.cols)} cells ${fmt(p.vi.cells)}`);
    $("landscape-info").textContent = `ordered representatives (ln n = ${fmt(max)})\n` + lines.join("\n");
    if (r.representatives.length) drawPoints($("rep"), r.representatives[0].labels);
    $("status").textContent = "";
  }, 10);
}

function holding() {
  const r = JSON.parse(demo.holding(+$("theta").value, +$("sharp").value, $("truth").value, +$("steep").value));
  const c = $("hist"), ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  const top = Math.max(...r.bins.map((b) => b.count), 1), w = c.width / r.bins.length;
  r.bins.forEach((b, i) => {
    const h = (c.height - 20) * b.count / top;
    ctx.fillStyle = b.hi <= 0 ? "#d62728" : "#2ca02c";
    ctx.fillRect(i * w + 1, c.height - 20 - h, w - 2, h);
  });
  ctx.fillStyle = "#444";
  ctx.fillText(fmt(r.bins[0].lo), 2, c.height - 6);
  ctx.fillText("0", c.width / 2 - 3, c.height - 6);
  ctx.fillText(fmt(r.bins[r.bins.length - 1].hi), c.width - 50, c.height - 6);
  $("holding-info").textContent =
    `held nodes  ${(100 * r.positive_fraction).toFixed(1)}%\nmean power  ${fmt(r.mean)}\nobjective   ${fmt(r.objective)}`;
}

async function main() {
  await init();
  demo = new Demo(1);
  points = JSON.parse(demo.points());
  $("status").textContent = "";
  for (const id of ["theta", "sharp"]) $(id).addEventListener("input", recluster);
  for (const id of ["truth", "steep"]) $(id).addEventListener("change", holding);
  $("run-landscape").addEventListener("click", landscape);
  recluster();
  landscape();
}

main().catch((e) => { $("status").textContent = String(e); });
