/** Dependency-free SVG line figures with fixed styling.
 *
 * Output is fully deterministic: fixed palette, fixed fonts, coordinates
 * rounded to 1/100 px, no timestamps or generated ids.
 */

export interface Series {
    label: string;
    x: number[];
    y: number[];
    /** draw point markers in addition to the line */
    markers?: boolean;
}

export interface FigureSpec {
    title: string;
    xLabel: string;
    yLabel: string;
    /** log10 y axis when "log" */
    yScale?: "linear" | "log";
    width?: number;
    height?: number;
}

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const MARGIN = { left: 64, right: 18, top: 34, bottom: 46 };

function fmtCoord(v: number): string {
    return (Math.round(v * 100) / 100).toFixed(2);
}

function fmtTick(v: number): string {
    if (v === 0) return "0";
    const a = Math.abs(v);
    if (a >= 1e4 || a < 1e-3) {
        const e = Math.floor(Math.log10(a));
        const mant = v / 10 ** e;
        const m = Math.round(mant * 100) / 100;
        return `${m}e${e}`;
    }
    return String(Math.round(v * 1e6) / 1e6);
}

function niceStep(span: number, target: number): number {
    const raw = span / target;
    const mag = 10 ** Math.floor(Math.log10(raw));
    for (const mult of [1, 2, 5, 10]) {
        if (mag * mult >= raw) return mag * mult;
    }
    return mag * 10;
}

function linearTicks(lo: number, hi: number): number[] {
    if (!(hi > lo)) return [lo];
    const step = niceStep(hi - lo, 5);
    const out: number[] = [];
    for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
        out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
    }
    return out;
}

function decadeTicks(lo: number, hi: number): number[] {
    const out: number[] = [];
    for (let e = Math.ceil(lo); e <= Math.floor(hi) + 1e-9; e += 1) {
        out.push(e);
    }
    return out.length ? out : [lo];
}

function esc(text: string): string {
    return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Render series into a complete standalone SVG document string. */
export function renderFigure(spec: FigureSpec, series: Series[]): string {
    const width = spec.width ?? 720;
    const height = spec.height ?? 480;
    const logY = spec.yScale === "log";

    const xs = series.flatMap((s) => s.x);
    const ysRaw = series.flatMap((s) => s.y);
    const ys = logY ? ysRaw.map((v) => Math.log10(v)) : ysRaw;
    let xLo = Math.min(...xs), xHi = Math.max(...xs);
    let yLo = Math.min(...ys), yHi = Math.max(...ys);
    if (xHi === xLo) { xHi += 1; xLo -= 1; }
    if (yHi === yLo) { yHi += 1; yLo -= 1; }
    const yPad = (yHi - yLo) * 0.05;
    yLo -= yPad;
    yHi += yPad;

    const plotW = width - MARGIN.left - MARGIN.right;
    const plotH = height - MARGIN.top - MARGIN.bottom;
    const px = (v: number) => MARGIN.left + ((v - xLo) / (xHi - xLo)) * plotW;
    const py = (v: number) => MARGIN.top + plotH - ((v - yLo) / (yHi - yLo)) * plotH;

    const out: string[] = [];
    out.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${width}" `
        + `height="${height}" viewBox="0 0 ${width} ${height}" `
        + `font-family="Helvetica, Arial, sans-serif">`);
    out.push(`<rect width="${width}" height="${height}" fill="#ffffff"/>`);
    out.push(`<text x="${width / 2}" y="20" text-anchor="middle" font-size="15">`
        + `${esc(spec.title)}</text>`);

    const xTicks = linearTicks(xLo, xHi);
    const yTicks = logY ? decadeTicks(yLo + yPad, yHi - yPad) : linearTicks(yLo, yHi);
    for (const t of xTicks) {
        const x = fmtCoord(px(t));
        out.push(`<line x1="${x}" y1="${MARGIN.top}" x2="${x}" `
            + `y2="${MARGIN.top + plotH}" stroke="#dddddd" stroke-width="1"/>`);
        out.push(`<text x="${x}" y="${MARGIN.top + plotH + 18}" `
            + `text-anchor="middle" font-size="11">${fmtTick(t)}</text>`);
    }
    for (const t of yTicks) {
        const y = fmtCoord(py(t));
        const label = logY ? `1e${fmtTick(t)}` : fmtTick(t);
        out.push(`<line x1="${MARGIN.left}" y1="${y}" `
            + `x2="${MARGIN.left + plotW}" y2="${y}" stroke="#dddddd" stroke-width="1"/>`);
        out.push(`<text x="${MARGIN.left - 6}" y="${y}" text-anchor="end" `
            + `dominant-baseline="middle" font-size="11">${label}</text>`);
    }

    out.push(`<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" `
        + `height="${plotH}" fill="none" stroke="#333333" stroke-width="1"/>`);
    out.push(`<text x="${MARGIN.left + plotW / 2}" y="${height - 10}" `
        + `text-anchor="middle" font-size="13">${esc(spec.xLabel)}</text>`);
    out.push(`<text x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" `
        + `font-size="13" transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">`
        + `${esc(spec.yLabel)}</text>`);

    series.forEach((s, i) => {
        const color = PALETTE[i % PALETTE.length];
        const pts = s.x.map((xv, j) => {
            const yv = logY ? Math.log10(s.y[j]) : s.y[j];
            return `${fmtCoord(px(xv))},${fmtCoord(py(yv))}`;
        });
        out.push(`<polyline points="${pts.join(" ")}" fill="none" `
            + `stroke="${color}" stroke-width="1.6"/>`);
        if (s.markers) {
            for (const p of pts) {
                const [cx, cy] = p.split(",");
                out.push(`<circle cx="${cx}" cy="${cy}" r="2.6" fill="${color}"/>`);
            }
        }
    });

    if (series.length > 1 || series[0].label) {
        const lx = MARGIN.left + plotW - 130;
        series.forEach((s, i) => {
            const ly = MARGIN.top + 14 + i * 16;
            const color = PALETTE[i % PALETTE.length];
            out.push(`<line x1="${lx}" y1="${ly - 4}" x2="${lx + 22}" y2="${ly - 4}" `
                + `stroke="${color}" stroke-width="1.6"/>`);
            out.push(`<text x="${lx + 28}" y="${ly}" font-size="11">${esc(s.label)}</text>`);
        });
    }

    out.push("</svg>");
    return out.join("\n") + "\n";
}
