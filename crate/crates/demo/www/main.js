import init, { torusRegion, graphProfile, groupReport } from "./pkg/gstate_demo.js";

const $ = (id) => document.getElementById(id);
const SVG = "http://www.w3.org/2000/svg";

function fail(node, e) {
  node.innerHTML = "";
  const p = document.createElement("p");
  p.className = "err";
  p.textContent = e.message ?? String(e);
  node.append(p);
}

function drawTorus() {
  const f = new FormData($("torus-form"));
  const v = (k) => Number(f.get(k));
  const svg = $("torus-svg");
  const summary = $("torus-summary");
  let doc;
  try {
    doc = JSON.parse(torusRegion(v("width"), v("height"), v("x"), v("y"), v("w"), v("h")));
  } catch (e) {
    svg.replaceChildren();
    fail(summary, e);
    return;
  }
  summary.className = "";
  summary.textContent =
    `S = ${doc.S} bits, boundary stars n_AB = ${doc.n_ab}, crossings sigma = ${doc.sigma}, ` +
    `perimeter ${doc.perimeter}`;
  const cell = Math.min(600 / doc.width, 440 / doc.height);
  svg.setAttribute("width", cell * doc.width + 20);
  svg.setAttribute("height", cell * doc.height + 20);
  svg.replaceChildren();
  for (const e of doc.edges) {
    const [x, y] = e.from;
    const line = document.createElementNS(SVG, "line");
    const x1 = 10 + x * cell + cell / 2;
    const y1 = 10 + y * cell + cell / 2;
    // wrapping edges are drawn as stubs leaving the frame
    const x2 = e.horizontal ? x1 + cell : x1;
    const y2 = e.horizontal ? y1 : y1 + cell;
    line.setAttribute("x1", x1);
    line.setAttribute("y1", y1);
    line.setAttribute("x2", Math.min(x2, 10 + cell * doc.width));
    line.setAttribute("y2", Math.min(y2, 10 + cell * doc.height));
    line.setAttribute("stroke", e.crossing ? "#c33" : e.side_a ? "#36c" : "#bbb");
    svg.append(line);
  }
}

function runGraph() {
  const out = $("graph-out");
  let doc;
  try {
    doc = JSON.parse(graphProfile($("graph-text").value));
  } catch (e) {
    fail(out, e);
    return;
  }
  const rows = doc.by_size
    .map((r) => `<tr><td>${r.size}</td><td>${r.cuts}</td><td>${r.min}</td>` +
      `<td>${r.mean.toFixed(3)}</td><td>${r.max}</td></tr>`)
    .join("");
  out.innerHTML =
    `<p>V1 = {${doc.v1.join(", ")}}, so S &le; |V1| = ${doc.v1_size} &le; &lfloor;n/2&rfloor; = ${doc.half_n}</p>` +
    `<table><tr><th>|A|</th><th>cuts</th><th>min S</th><th>mean S</th><th>max S</th></tr>${rows}</table>`;
}

function runGroup() {
  const out = $("group-out");
  try {
    const doc = JSON.parse(groupReport($("group-text").value, $("group-partition").value));
    out.className = "";
    out.textContent = JSON.stringify(doc, null, 2);
  } catch (e) {
    out.className = "err";
    out.textContent = e.message ?? String(e);
  }
}

await init();
$("torus-form").addEventListener("input", drawTorus);
$("graph-run").addEventListener("click", runGraph);
$("group-run").addEventListener("click", runGroup);
drawTorus();
runGraph();
runGroup();
