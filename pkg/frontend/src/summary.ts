import { SweepRow } from "./columns";

function pad(text: string, width: number): string {
    return text.length >= width ? text : " ".repeat(width - text.length) + text;
}

function line(cells: string[], widths: number[]): string {
    return cells.map((c, i) => pad(c, widths[i])).join("  ");
}

/** One-page plain-text digest of a sweep: the row table plus the spread
 *  between the flattest and steepest ends of the beta range. */
export function renderSummary(rows: SweepRow[], source: string): string {
    const widths = [6, 4, 8, 8, 8, 8, 10];
    const out: string[] = [];
    out.push("sweep summary");
    out.push(`source: ${source}`);
    out.push(`rows: ${rows.length}`);
    out.push("");
    out.push(
        line(["beta", "n", "mmse", "+-", "kl", "pred", "frac_point"], widths),
    );
    for (const r of rows) {
        out.push(
            line(
                [
                    r.beta.toFixed(2),
                    String(r.n),
                    r.mmse.toFixed(4),
                    r.mmse_se.toFixed(4),
                    r.kl_ratio.toFixed(4),
                    r.pred_ent_ratio.toFixed(4),
                    r.frac_point.toFixed(3),
                ],
                widths,
            ),
        );
    }
    const first = rows[0];
    const last = rows[rows.length - 1];
    out.push("");
    out.push(
        `mmse moves ${first.mmse.toFixed(4)} -> ${last.mmse.toFixed(4)} ` +
            `across beta ${first.beta} -> ${last.beta}`,
    );
    const below = rows.filter((r) => r.beta < 1).map((r) => r.mmse);
    const above = rows.filter((r) => r.beta > 1).map((r) => r.mmse);
    if (below.length > 0 && above.length > 0) {
        const meanBelow = below.reduce((a, b) => a + b, 0) / below.length;
        const meanAbove = above.reduce((a, b) => a + b, 0) / above.length;
        out.push(
            `mean mmse below the critical point: ${meanBelow.toFixed(4)}; ` +
                `above: ${meanAbove.toFixed(4)}`,
        );
    }
    return out.join("\n") + "\n";
}
