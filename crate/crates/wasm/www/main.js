import init, { classify_triple, elliptope_mesh, raffle_region, saturate } from "./pkg/boole_wasm.js";

const $ = (id) => document.getElementById(id);
const canvas = $("view");
const ctx = canvas.getContext("2d");

let yaw = 0.6, pitch = 0.4;
let mesh = [];
let region = null;
let current = [0, 0, 0];

function project([x, y, z]) {
  const cy = Math.cos(yaw), sy = Math.sin(yaw), cp = Math.cos(pitch), sp = Math.sin(pitch);
  const x1 = cy * x + sy * z, z1 = -sy * x + cy * z;
  const y1 = cp * y - sp * z1, depth = sp * y + cp * z1;
  const s = canvas.width * 0.3;
  return [canvas.width / 2 + s * x1, canvas.height / 2 - s * y1, depth];
}

function dot(p, r, color) {
  const [u, v] = project(p);
  ctx.fillStyle = color;
  ctx.fillRect(u - r / 2, v - r / 2, r, r);
}

function draw() {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  // cube [-1,1]^3
  const corners = [];
  for (const x of [-1, 1]) for (const y of [-1, 1]) for (const z of [-1, 1]) corners.push([x, y, z]);
  ctx.strokeStyle = "#ddd";
  for (let i = 0; i < 8; i++) for (let j = i + 1; j < 8; j++) {
    const d = corners[i].reduce((n, v, t) => n + (v !== corners[j][t]), 0);
    if (d !== 1) continue;
    const [u1, v1] = project(corners[i]), [u2, v2] = project(corners[j]);
    ctx.beginPath(); ctx.moveTo(u1, v1); ctx.lineTo(u2, v2); ctx.stroke();
  }
  for (const p of mesh) dot(p, 2, "rgba(60,90,200,0.35)");
  if (region) {
    ctx.strokeStyle = "rgba(220,120,0,0.25)";
    const pts = region.hull.points;
    for (const f of region.hull.faces) {
      const q = f.map((i) => project(pts[i]));
      ctx.beginPath(); ctx.moveTo(q[0][0], q[0][1]);
      ctx.lineTo(q[1][0], q[1][1]); ctx.lineTo(q[2][0], q[2][1]); ctx.closePath(); ctx.stroke();
    }
    for (const p of region.cloud) dot(p, 2, "rgba(220,120,0,0.6)");
  }
  dot(current, 8, "#c00");
}

function readTriple() {
  current = ["a", "b", "c"].map((id) => {
    const v = parseFloat($(id).value);
    $(id + "-v").textContent = v.toFixed(2);
    return v;
  });
  return current;
}

function onTriple() {
  const [a, b, c] = readTriple();
  const out = $("classify");
  try {
    const r = JSON.parse(classify_triple(a, b, c));
    out.className = r.placement;
    out.textContent =
      `${r.placement}\n1 + 2abc - a^2 - b^2 - c^2 = ${r.value.toFixed(6)}\n` +
      `eigenvalues ${r.eigenvalues.map((x) => x.toFixed(4)).join(", ")}`;
  } catch (e) {
    out.className = "";
    out.textContent = e.message;
  }
  draw();
}

function onRaffle() {
  const out = $("raffle");
  out.textContent = "sampling...";
  setTimeout(() => {
    try {
      const t0 = performance.now();
      region = JSON.parse(raffle_region(
        parseInt($("k").value), $("zero-sum").checked,
        parseInt($("samples").value), 100000, parseInt($("seed").value)));
      const c = region.coverage;
      out.textContent =
        `coverage of the elliptope ${c.fraction.toFixed(4)} +- ${c.half_width.toFixed(4)}\n` +
        `hull volume ${region.hull.volume.toFixed(4)}, ${region.hull.faces.length} faces\n` +
        `${(performance.now() - t0).toFixed(0)} ms`;
    } catch (e) {
      region = null;
      out.textContent = e.message;
    }
    draw();
  }, 10);
}

function onSaturate() {
  const [a, b, c] = readTriple();
  const out = $("saturate");
  try {
    const r = JSON.parse(saturate($("spin").value, a, b, c));
    out.textContent =
      r.directions.map((d, i) => `e${i + 1} = (${d.map((x) => x.toFixed(4)).join(", ")})`).join("\n") +
      `\nachieved ${r.achieved.map((x) => x.toFixed(6)).join(", ")}\nmax deviation ${r.max_deviation.toExponential(2)}`;
  } catch (e) {
    out.textContent = e.message;
  }
}

let drag = null;
canvas.addEventListener("mousedown", (e) => { drag = [e.clientX, e.clientY]; });
window.addEventListener("mouseup", () => { drag = null; });
window.addEventListener("mousemove", (e) => {
  if (!drag) return;
  yaw += (e.clientX - drag[0]) * 0.01;
  pitch = Math.max(-1.5, Math.min(1.5, pitch + (e.clientY - drag[1]) * 0.01));
  drag = [e.clientX, e.clientY];
  draw();
});

await init();
mesh = JSON.parse(elliptope_mesh(41));
for (const id of ["a", "b", "c"]) $(id).addEventListener("input", onTriple);
$("raffle-go").addEventListener("click", onRaffle);
$("sat-go").addEventListener("click", onSaturate);
onTriple();
