// Built with: wasm-bindgen --target web --out-dir www/pkg <path to diffeo_web.wasm>
import init, { CurveRun, MeshLevels, square_holonomy } from "./pkg/diffeo_web.js";

const $ = (id) => document.getElementById(id);

function drawCurves(canvas, layers) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  let lim = 0;
  for (const { pts } of layers) for (const v of pts) lim = Math.max(lim, Math.abs(v));
  const scale = (0.45 * Math.min(canvas.width, canvas.height)) / (lim || 1);
  for (const { pts, color, dash } of layers) {
    ctx.beginPath();
    ctx.setLineDash(dash ? [6, 4] : []);
    ctx.strokeStyle = color;
    for (let i = 0; i < pts.length; i += 2) {
      const x = canvas.width / 2 + scale * pts[i];
      const y = canvas.height / 2 - scale * pts[i + 1];
      i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y);
    }
    ctx.closePath();
    ctx.stroke();
  }
}

let run = null;

function showIterate() {
  if (!run) return;
  const k = Number($("iter").value);
  const obj = run.objectives();
  drawCurves($("curves"), [
    { pts: run.target(), color: "#c33", dash: true },
    { pts: run.iterate(0), color: "#999" },
    { pts: run.iterate(k), color: "#000" },
  ]);
  $("descent-info").textContent =
    `iterate ${k}/${run.iterations()}  J = ${obj[Math.min(k, obj.length - 1)].toExponential(3)}  (${run.termination()})`;
}

function runDescent() {
  if (run) run.free();
  try {
    run = new CurveRun(
      Number($("ea").value), Number($("eb").value), Number($("en").value),
      $("metric").value, Number($("hs").value), 500,
    );
  } catch (e) {
    run = null;
    $("descent-info").textContent = String(e);
    return;
  }
  $("iter").max = run.iterations();
  $("iter").value = run.iterations();
  showIterate();
}

function showHolonomy() {
  const side = Number($("side").value);
  const [curved, predicted, flat] = square_holonomy(0, 0, side, 64);
  $("hol-info").textContent =
    `side ${side.toFixed(2)}: |log hol| = ${curved.toExponential(4)}, ` +
    `side²|[A,B]| = ${predicted.toExponential(4)}, flat connection ${flat.toExponential(2)}`;
}

let mesh = null;

function showMesh() {
  const k = Number($("level").value);
  const canvas = $("mesh");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const s = canvas.width - 20;
  const tri = mesh.triangles(k);
  ctx.strokeStyle = "#246";
  ctx.lineWidth = 0.7;
  for (let i = 0; i < tri.length; i += 6) {
    ctx.beginPath();
    ctx.moveTo(10 + s * tri[i], 10 + s * (1 - tri[i + 1]));
    ctx.lineTo(10 + s * tri[i + 2], 10 + s * (1 - tri[i + 3]));
    ctx.lineTo(10 + s * tri[i + 4], 10 + s * (1 - tri[i + 5]));
    ctx.closePath();
    ctx.stroke();
  }
  const h = mesh.mesh_sizes();
  $("mesh-info").textContent = `${tri.length / 6} faces, mesh size ${h[k].toPrecision(6)}`;
}

await init();
mesh = new MeshLevels(5);
$("run").addEventListener("click", runDescent);
$("iter").addEventListener("input", showIterate);
$("side").addEventListener("input", showHolonomy);
$("level").addEventListener("input", showMesh);
runDescent();
showHolonomy();
showMesh();
