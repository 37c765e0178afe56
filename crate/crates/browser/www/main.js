import init, { ref_report, infer, sweep } from "./pkg/hsbar_browser.js";

const $ = (id) => document.getElementById(id);

function guard(out, f) {
  try {
    f();
  } catch (e) {
    out.innerHTML = "";
    const p = document.createElement("p");
    p.className = "fail";
    p.textContent = String(e);
    out.appendChild(p);
  }
}

function drawSurface(surface) {
  const c = $("surface");
  const ctx = c.getContext("2d");
  const k = surface.points.length;
  const cell = c.width / k;
  surface.values.forEach((row, i) =>
    row.forEach((v, j) => {
      const g = Math.round(255 * v);
      ctx.fillStyle = `rgb(${g},${g},${g})`;
      ctx.fillRect(j * cell, i * cell, Math.ceil(cell), Math.ceil(cell));
    }),
  );
}

function runRef() {
  const out = $("ref-out");
  guard(out, () => {
    const r = JSON.parse(ref_report($("ref").value, Number($("step").value), 101));
    const rows = r.axioms
      .map((a) => {
        const where = a.counterexample ? ` at (${a.counterexample.join(", ")})` : "";
        return `<tr><td>${a.property}</td><td class="${a.holds ? "pass" : "fail"}">${a.holds ? "holds" : "fails" + where}</td></tr>`;
      })
      .join("");
    out.innerHTML = `<p>${r.ref}: <b class="${r.is_ref ? "pass" : "fail"}">${r.is_ref ? "a REF" : "not a REF"}</b></p><table>${rows}</table>`;
    drawSurface(r.surface);
  });
}

function runInfer() {
  const out = $("infer-out");
  guard(out, () => {
    const r = JSON.parse(infer($("system").value, $("method").value));
    const lines = [
      `method: ${r.method}`,
      ...r.antecedent_similarities.map((s, i) => `S_F(A'_${i + 1},A_${i + 1}) = ${s}`),
      `s = ${r.similarity}`,
      "output:",
      ...r.output.map(([l, v]) => `  ${l}: ${v}`),
      ...r.intermediates.flatMap((i) => [`${i.label}:`, ...i.set.map(([l, v]) => `  ${l}: ${v}`)]),
      ...r.diagnostics.map((d) => `note: ${d}`),
    ];
    if (r.reproduction) {
      for (const e of r.reproduction.entries.filter((e) => !e.agrees)) {
        lines.push(`differs: ${e.quantity}: reference ${e.reference}, recomputed ${e.recomputed}`);
      }
    }
    out.textContent = lines.join("\n");
  });
}

function runSweep() {
  const out = $("sweep-out");
  guard(out, () => {
    const r = JSON.parse(sweep(Number($("nmin").value), Number($("nmax").value), Number($("u").value), Number($("m").value)));
    const arms = ["flat", "hier", "flat-reduced", "hier-reduced"];
    const ns = [...new Set(r.points.map((p) => p.n))];
    const cell = (arm, n) => {
      const p = r.points.find((p) => p.arm === arm && p.n === n);
      return p.ops ?? "skipped";
    };
    const head = `<tr><th>n</th>${arms.map((a) => `<th>${a}</th>`).join("")}</tr>`;
    const body = ns.map((n) => `<tr><td>${n}</td>${arms.map((a) => `<td>${cell(a, n)}</td>`).join("")}</tr>`).join("");
    const fit = r.flat_fit ? `<p>flat ~ ${r.flat_fit.c.toFixed(3)}·${r.flat_fit.base}<sup>n</sup>, hier ~ ${r.hier_fit.intercept.toFixed(2)} + ${r.hier_fit.slope.toFixed(2)}n</p>` : "";
    out.innerHTML = `<table>${head}${body}</table>${fit}`;
  });
}

await init();
$("ref-run").onclick = runRef;
$("infer-run").onclick = runInfer;
$("sweep-run").onclick = runSweep;
try {
  const res = await fetch("../../../fixtures/three_antecedent_product.json");
  if (res.ok) $("system").value = await res.text();
} catch (_) {
  // Served without the fixtures directory; the textarea stays empty.
}
runRef();
