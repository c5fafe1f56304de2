export interface ScalingRow {
  targetId: string;
  kind: string;
  eps: number;
  detCount: number | null;
  probCount: number | null;
  bestDistance: number;
  elapsedMs: number | null;
}

export interface RunSummary {
  config: {
    gate_set: string;
    log_base: number;
    seed: number;
    budget: number;
    eps_grid: number[];
    prob: boolean;
  };
  invariants_ok: boolean;
  problems: string[];
  slopes: Record<string, number | null>;
}

export interface PlotOptions {
  logBase: number;
  referenceSlopes: number[];
  width: number;
  height: number;
}

export interface ReportSpec {
  csvPaths: string[];
  summaryPath: string;
  outDir: string;
  options: PlotOptions;
}

export const DEFAULT_OPTIONS: PlotOptions = {
  logBase: 2,
  referenceSlopes: [3, 1.5, 4],
  width: 720,
  height: 480,
};
