/** Column contract of the sweep harness output (CSV header order). */
export const HARNESS_COLUMNS = [
    "beta",
    "n",
    "mmse",
    "mmse_se",
    "kl_ratio",
    "kl_ratio_se",
    "pred_ent_ratio",
    "pred_ent_ratio_se",
    "frac_point",
    "wall_ms",
] as const;

export type HarnessColumn = (typeof HARNESS_COLUMNS)[number];

export type SweepRow = Record<HarnessColumn, number>;

export type FigureKind = "mmse" | "dn" | "pred-entropy";

export interface MetricSpec {
    value: HarnessColumn;
    se: HarnessColumn;
    label: string;
}

/** Which harness columns each figure kind plots. */
export const FIGURE_METRICS: Record<FigureKind, MetricSpec> = {
    mmse: { value: "mmse", se: "mmse_se", label: "MMSE" },
    dn: { value: "kl_ratio", se: "kl_ratio_se", label: "normalized divergence D_N" },
    "pred-entropy": {
        value: "pred_ent_ratio",
        se: "pred_ent_ratio_se",
        label: "predictive entropy ratio",
    },
};
