/**
 * plotkit — static SVG figure rendering for hrvlab detection reports.
 *
 * Reads a report directory produced by `hrvlab detect` (or one
 * replication of `hrvlab experiment`) and renders a figure layout to a
 * deterministic SVG document. Never computes statistics and never
 * mutates report files.
 */
import * as fs from "node:fs";
import * as path from "node:path";

import { LayoutName, renderLayout } from "./layouts";
import { Report, UsageError, loadReport } from "./report";

export { LAYOUT_NAMES, renderLayout } from "./layouts";
export type { LayoutName } from "./layouts";
export {
  Report,
  ReportError,
  UsageError,
  densityOf,
  loadReport,
  parseReport,
  qqOf,
  seriesOf,
} from "./report";

export interface FigureSpec {
  /** Report directory (containing report.json) or a report.json path. */
  report: string;
  /** One of the LAYOUT_NAMES. */
  layout: LayoutName | string;
  /** Output image path; written atomically-enough for a single process. */
  out: string;
  /** Only "svg" is supported. */
  format?: string;
}

/** Render a figure spec to disk, returning the SVG text that was written. */
export function render(spec: FigureSpec): string {
  const format = spec.format ?? "svg";
  if (format !== "svg") {
    throw new UsageError(`unsupported output format '${format}' (only svg is supported)`);
  }
  const report: Report = loadReport(spec.report);
  const svg = renderLayout(report, spec.layout);
  fs.mkdirSync(path.dirname(path.resolve(spec.out)), { recursive: true });
  fs.writeFileSync(spec.out, svg, "utf8");
  return svg;
}
