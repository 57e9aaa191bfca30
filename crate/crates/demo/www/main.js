// Built with: wasm-pack build crates/demo --target web --out-dir www/pkg
import init, { tree_explorer, frankl_table, decay_curve } from "./pkg/treeshade_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const SVG = "http://www.w3.org/2000/svg";

function svgEl(tag, attrs) {
  const e = document.createElementNS(SVG, tag);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  return e;
}

function table(header, rows) {
  const t = document.createElement("table");
  const head = t.insertRow();
  for (const h of header) {
    const th = document.createElement("th");
    th.textContent = h;
    head.appendChild(th);
  }
  for (const r of rows) {
    const tr = t.insertRow();
    for (const c of r) tr.insertCell().textContent = c ?? "";
  }
  return t;
}

function fail(out, e) {
  out.innerHTML = "";
  const p = document.createElement("p");
  p.className = "err";
  p.textContent = String(e);
  out.appendChild(p);
}

function drawTree() {
  const out = $("tree-out");
  try {
    const v = JSON.parse(tree_explorer(num("tree-f"), num("tree-depth"), num("tree-keep"), BigInt(num("tree-seed"))));
    out.innerHTML = "";
    if (v.nodes.length) {
      const width = 900, rowH = 40;
      const svg = svgEl("svg", { width, height: rowH * (v.depth + 1) + 20 });
      // x position: the node's place among all nodes of the full level
      const pos = new Map();
      v.nodes.forEach((level, n) => {
        const full = v.f.slice(0, n).reduce((a, b) => a * b, 1);
        for (const node of level) {
          let idx = 0;
          node.path.forEach((c, i) => { idx = idx * v.f[i] + c; });
          const x = ((idx + 0.5) / full) * width;
          const y = 15 + n * rowH;
          pos.set(node.path.join(","), [x, y]);
          if (n > 0) {
            const [px, py] = pos.get(node.path.slice(0, -1).join(","));
            svg.appendChild(svgEl("line", { x1: px, y1: py, x2: x, y2: y, stroke: "#bbb" }));
          }
        }
      });
      v.nodes.forEach((level) => {
        for (const node of level) {
          const [x, y] = pos.get(node.path.join(","));
          svg.appendChild(svgEl("circle", { cx: x, cy: y, r: 4, class: "c" + node.colour }));
        }
      });
      out.appendChild(svg);
    } else {
      out.append(`${v.node_count} nodes: too many to draw.`);
    }
    out.appendChild(table(["level", "size", "density", "class"],
      v.levels.map((l) => [l.level, l.size, l.density, l.class])));
    const p = document.createElement("p");
    p.textContent = `homogeneous levels ${JSON.stringify(v.homogeneous_levels)}; density ${v.density_at_bound} ≤ ${v.product_bound} ≤ ${v.geometric_bound}: ` +
      (v.lemma5_vacuous ? "vacuous" : v.lemma5_holds ? "holds" : "FAILS");
    out.appendChild(p);
  } catch (e) {
    fail(out, e);
  }
}

function showFrankl() {
  const out = $("fr-out");
  try {
    const v = JSON.parse(frankl_table(num("fr-n"), num("fr-m"), num("fr-k"), num("fr-t")));
    out.innerHTML = "";
    out.appendChild(table(["i", "|F_i|", `|${v.m}-shade|`], v.rows.map((r) => [r.i, r.size, r.shade_size])));
    const p = document.createElement("p");
    const exact = v.oracle_m0 ?? `— (${v.oracle_note})`;
    p.textContent = `largest t-intersecting family: ${v.ak_max} (F_${v.ak_index}); conjectured largest shade: ${v.conjectured_m0}; exact: ${exact}`;
    if (v.oracle_m0 !== null && v.conjectured_m0 !== null && BigInt(v.oracle_m0) > BigInt(v.conjectured_m0)) {
      p.textContent += " — exceeds every Frankl family";
    }
    out.appendChild(p);
  } catch (e) {
    fail(out, e);
  }
}

function plotDecay() {
  const out = $("dc-out");
  try {
    const v = JSON.parse(decay_curve($("dc-g").value, $("dc-h").value, $("dc-tau").value, BigInt(num("dc-n"))));
    out.innerHTML = "";
    const w = 900, h = 260, pad = 40;
    const ys = v.points.map((p) => Math.log10(Math.max(p.ratio, 1e-300)));
    const lo = Math.min(...ys), hi = Math.max(...ys);
    const span = hi - lo || 1;
    const svg = svgEl("svg", { width: w, height: h });
    const pts = v.points.map((p, i) => {
      const x = pad + (i / Math.max(v.points.length - 1, 1)) * (w - 2 * pad);
      const y = h - pad - ((ys[i] - lo) / span) * (h - 2 * pad);
      return `${x},${y}`;
    });
    svg.appendChild(svgEl("polyline", { points: pts.join(" "), fill: "none", stroke: "#3465a4" }));
    const label = svgEl("text", { x: pad, y: 16 });
    label.textContent = `log10 ratio in [${lo.toFixed(3)}, ${hi.toFixed(3)}]`;
    svg.appendChild(label);
    out.appendChild(svg);
    const p = document.createElement("p");
    p.textContent = `liminf = ${v.rho}; window minimum in [${v.window_lo}, ${v.window_hi}] at n = ${v.argmin} (${v.class})`;
    out.appendChild(p);
  } catch (e) {
    fail(out, e);
  }
}

await init();
$("tree-go").onclick = drawTree;
$("fr-go").onclick = showFrankl;
$("dc-go").onclick = plotDecay;
drawTree();
showFrankl();
plotDecay();
