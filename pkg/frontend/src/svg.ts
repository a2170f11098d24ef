import { FIGURE_METRICS, FigureKind, SweepRow } from "./columns";

export interface FigureSpec {
    kind: FigureKind;
    title?: string;
    errorBars: boolean;
}

export interface Layout {
    xMin: number;
    xMax: number;
    yMin: number;
    yMax: number;
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 70, right: 24, top: 44, bottom: 56 };

/** Axis ranges: x spans the betas, y always covers [0, 1.05] and grows to
 *  fit data that exceeds it (the divergence ratio passes 1 beyond the
 *  transition). */
export function layout(rows: SweepRow[], kind: FigureKind): Layout {
    const metric = FIGURE_METRICS[kind];
    const betas = rows.map((r) => r.beta);
    let top = 1.05;
    for (const row of rows) {
        top = Math.max(top, row[metric.value] + 3 * row[metric.se]);
    }
    return {
        xMin: Math.min(...betas),
        xMax: Math.max(...betas),
        yMin: 0,
        yMax: Math.ceil(top * 20) / 20,
    };
}

function fmt(value: number): string {
    return Number(value.toPrecision(6)).toString();
}

function ticks(lo: number, hi: number, count: number): number[] {
    const out: number[] = [];
    for (let i = 0; i <= count; i++) out.push(lo + ((hi - lo) * i) / count);
    return out;
}

/** Render a deterministic standalone SVG (no timestamps, fixed style). */
export function render(rows: SweepRow[], spec: FigureSpec): string {
    if (rows.length === 0) throw new Error("nothing to plot");
    const metric = FIGURE_METRICS[spec.kind];
    const box = layout(rows, spec.kind);
    const plotW = WIDTH - MARGIN.left - MARGIN.right;
    const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
    const sx = (beta: number) =>
        MARGIN.left + (box.xMax === box.xMin ? plotW / 2 : ((beta - box.xMin) / (box.xMax - box.xMin)) * plotW);
    const sy = (value: number) => MARGIN.top + plotH - ((value - box.yMin) / (box.yMax - box.yMin)) * plotH;

    const parts: string[] = [];
    parts.push(
        `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
            `viewBox="0 0 ${WIDTH} ${HEIGHT}" data-kind="${spec.kind}" ` +
            `data-x-min="${fmt(box.xMin)}" data-x-max="${fmt(box.xMax)}" ` +
            `data-y-min="${fmt(box.yMin)}" data-y-max="${fmt(box.yMax)}">`,
    );
    parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);

    const title = spec.title ?? `${metric.label} vs beta`;
    parts.push(
        `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-family="sans-serif" ` +
            `font-size="15" fill="#111111">${title}</text>`,
    );

    // axes and grid
    for (const t of ticks(box.yMin, box.yMax, 5)) {
        const y = sy(t);
        parts.push(
            `<line x1="${MARGIN.left}" y1="${fmt(y)}" x2="${WIDTH - MARGIN.right}" y2="${fmt(y)}" ` +
                `stroke="#dddddd" stroke-width="1"/>`,
        );
        parts.push(
            `<text x="${MARGIN.left - 8}" y="${fmt(y + 4)}" text-anchor="end" ` +
                `font-family="sans-serif" font-size="11" fill="#444444">${fmt(t)}</text>`,
        );
    }
    for (const t of ticks(box.xMin, box.xMax, Math.min(8, Math.max(1, rows.length - 1)))) {
        const x = sx(t);
        parts.push(
            `<line x1="${fmt(x)}" y1="${HEIGHT - MARGIN.bottom}" x2="${fmt(x)}" ` +
                `y2="${HEIGHT - MARGIN.bottom + 5}" stroke="#444444" stroke-width="1"/>`,
        );
        parts.push(
            `<text x="${fmt(x)}" y="${HEIGHT - MARGIN.bottom + 20}" text-anchor="middle" ` +
                `font-family="sans-serif" font-size="11" fill="#444444">${fmt(t)}</text>`,
        );
    }
    parts.push(
        `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" ` +
            `y2="${HEIGHT - MARGIN.bottom}" stroke="#111111" stroke-width="1.5"/>`,
    );
    parts.push(
        `<line x1="${MARGIN.left}" y1="${HEIGHT - MARGIN.bottom}" x2="${WIDTH - MARGIN.right}" ` +
            `y2="${HEIGHT - MARGIN.bottom}" stroke="#111111" stroke-width="1.5"/>`,
    );
    parts.push(
        `<text x="${WIDTH / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-family="sans-serif" ` +
            `font-size="13" fill="#111111">beta = n / n*</text>`,
    );
    parts.push(
        `<text x="18" y="${HEIGHT / 2}" text-anchor="middle" font-family="sans-serif" ` +
            `font-size="13" fill="#111111" transform="rotate(-90 18 ${HEIGHT / 2})">${metric.label}</text>`,
    );

    // critical-sample-size reference at beta = 1
    if (box.xMin <= 1 && 1 <= box.xMax) {
        const x = sx(1);
        parts.push(
            `<line class="beta-one" x1="${fmt(x)}" y1="${MARGIN.top}" x2="${fmt(x)}" ` +
                `y2="${HEIGHT - MARGIN.bottom}" stroke="#c0392b" stroke-width="1.5" ` +
                `stroke-dasharray="6,4"/>`,
        );
        parts.push(
            `<text x="${fmt(x + 5)}" y="${MARGIN.top + 14}" font-family="sans-serif" ` +
                `font-size="11" fill="#c0392b">beta = 1</text>`,
        );
    }

    if (spec.errorBars) {
        for (const row of rows) {
            const x = sx(row.beta);
            const lo = sy(row[metric.value] - row[metric.se]);
            const hi = sy(row[metric.value] + row[metric.se]);
            parts.push(
                `<line class="error-bar" x1="${fmt(x)}" y1="${fmt(lo)}" x2="${fmt(x)}" ` +
                    `y2="${fmt(hi)}" stroke="#2c6fbb" stroke-width="1.5"/>`,
            );
            for (const y of [lo, hi]) {
                parts.push(
                    `<line x1="${fmt(x - 4)}" y1="${fmt(y)}" x2="${fmt(x + 4)}" y2="${fmt(y)}" ` +
                        `stroke="#2c6fbb" stroke-width="1.5"/>`,
                );
            }
        }
    }

    const points = rows.map((row) => `${fmt(sx(row.beta))},${fmt(sy(row[metric.value]))}`);
    parts.push(
        `<polyline points="${points.join(" ")}" fill="none" stroke="#2c6fbb" stroke-width="2"/>`,
    );
    for (const row of rows) {
        parts.push(
            `<circle cx="${fmt(sx(row.beta))}" cy="${fmt(sy(row[metric.value]))}" r="3.5" ` +
                `fill="#2c6fbb"/>`,
        );
    }
    parts.push("</svg>");
    return parts.join("\n") + "\n";
}
