/**
 * Detection-report reading: the published JSON contract of `hrvlab detect`.
 *
 * A report directory contains `report.json` with four sections:
 *   meta      — run parameters (schema_version, n, thresholds, q_list, ...)
 *   series    — diagnostic label -> [k, value] pairs
 *   qq        — QQ label -> [theoretical, empirical] pairs
 *   densities — density label -> { x, density, bandwidth }
 *
 * Only this file knows the JSON shape; layouts consume the typed accessors.
 */
import * as fs from "node:fs";
import * as path from "node:path";

export const SUPPORTED_SCHEMA_VERSION = 1;

/** Bad invocation: missing/unreadable files, unknown names. Exit code 1. */
export class UsageError extends Error {}

/** Structurally invalid or incompatible report content. Exit code 2. */
export class ReportError extends Error {}

export interface KGrid {
  min: number;
  max: number;
  step: number;
}

export interface ReportMeta {
  schema_version: number;
  n: number;
  n_interior: number;
  rank_mode: string;
  thresholds: number[];
  q_list: number[];
  k_grid: KGrid;
  [extra: string]: unknown;
}

export interface Density {
  x: number[];
  density: number[];
  bandwidth: number;
}

export type SeriesPoints = Array<[number, number]>;
export type QqPoints = Array<[number, number]>;

export interface Report {
  meta: ReportMeta;
  series: Record<string, SeriesPoints>;
  qq: Record<string, QqPoints>;
  densities: Record<string, Density>;
}

function isNumberPairList(v: unknown): v is Array<[number, number]> {
  return (
    Array.isArray(v) &&
    v.every(
      (p) =>
        Array.isArray(p) &&
        p.length === 2 &&
        typeof p[0] === "number" &&
        typeof p[1] === "number",
    )
  );
}

function checkSection(
  raw: Record<string, unknown>,
  name: "series" | "qq",
): Record<string, Array<[number, number]>> {
  const section = raw[name];
  if (typeof section !== "object" || section === null || Array.isArray(section)) {
    throw new ReportError(`report.json: '${name}' must be an object`);
  }
  for (const [label, points] of Object.entries(section)) {
    if (!isNumberPairList(points)) {
      throw new ReportError(`report.json: ${name} entry '${label}' is not a list of [number, number] pairs`);
    }
  }
  return section as Record<string, Array<[number, number]>>;
}

/** Parse and structurally validate a report document. */
export function parseReport(text: string, origin: string): Report {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (e) {
    throw new ReportError(`${origin}: not valid JSON (${(e as Error).message})`);
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new ReportError(`${origin}: top level must be an object`);
  }
  const doc = raw as Record<string, unknown>;
  for (const key of ["meta", "series", "qq", "densities"]) {
    if (!(key in doc)) {
      throw new ReportError(`${origin}: missing top-level section '${key}'`);
    }
  }
  const meta = doc.meta as Record<string, unknown>;
  if (typeof meta !== "object" || meta === null) {
    throw new ReportError(`${origin}: 'meta' must be an object`);
  }
  const version = meta.schema_version;
  if (version !== SUPPORTED_SCHEMA_VERSION) {
    throw new ReportError(
      `${origin}: unsupported report schema_version ${JSON.stringify(version)} (expected ${SUPPORTED_SCHEMA_VERSION})`,
    );
  }
  for (const field of ["thresholds", "q_list"]) {
    const v = meta[field];
    if (!Array.isArray(v) || !v.every((x) => typeof x === "number")) {
      throw new ReportError(`${origin}: meta.${field} must be a list of numbers`);
    }
  }
  const densities = doc.densities;
  if (typeof densities !== "object" || densities === null || Array.isArray(densities)) {
    throw new ReportError(`${origin}: 'densities' must be an object`);
  }
  for (const [label, d] of Object.entries(densities)) {
    const dd = d as Record<string, unknown>;
    if (
      typeof dd !== "object" ||
      dd === null ||
      !Array.isArray(dd.x) ||
      !Array.isArray(dd.density) ||
      typeof dd.bandwidth !== "number"
    ) {
      throw new ReportError(`${origin}: density entry '${label}' must have x, density, bandwidth`);
    }
  }
  return {
    meta: meta as unknown as ReportMeta,
    series: checkSection(doc, "series"),
    qq: checkSection(doc, "qq"),
    densities: densities as Record<string, Density>,
  };
}

/** Load `report.json` from a report directory (or a direct file path). */
export function loadReport(reportDir: string): Report {
  let file = reportDir;
  const stat = fs.existsSync(file) ? fs.statSync(file) : null;
  if (stat === null) {
    throw new UsageError(`report not found: ${reportDir}`);
  }
  if (stat.isDirectory()) {
    file = path.join(reportDir, "report.json");
    if (!fs.existsSync(file)) {
      throw new UsageError(`report not found: no report.json in ${reportDir}`);
    }
  }
  return parseReport(fs.readFileSync(file, "utf8"), file);
}

/** Fetch a diagnostic series, erroring with the missing label by name. */
export function seriesOf(report: Report, label: string): SeriesPoints {
  const s = report.series[label];
  if (s === undefined) {
    throw new ReportError(`report is missing series '${label}'`);
  }
  return s;
}

/** Fetch a QQ point set, erroring with the missing label by name. */
export function qqOf(report: Report, label: string): QqPoints {
  const s = report.qq[label];
  if (s === undefined) {
    throw new ReportError(`report is missing qq entry '${label}'`);
  }
  return s;
}

/** Fetch a density grid, erroring with the missing label by name. */
export function densityOf(report: Report, label: string): Density {
  const d = report.densities[label];
  if (d === undefined) {
    throw new ReportError(`report is missing density '${label}'`);
  }
  return d;
}

/**
 * Format a number the way the report labels embed it (shortest decimal:
 * 0.8 -> "0.8", 100 -> "100"), for assembling labels like
 * `pickandsish_1@q0.8` and `ratio_tail_hill_max@k100`.
 */
export function labelNumber(x: number): string {
  return String(x);
}
