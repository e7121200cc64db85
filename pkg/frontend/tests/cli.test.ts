import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { afterAll, describe, expect, it } from "vitest";

import { runCli } from "../src/cli";

const FIXTURES = path.join(__dirname, "fixtures");
const EX31 = path.join(FIXTURES, "ex31-case1");

const tmp = fs.mkdtempSync(path.join(os.tmpdir(), "plotkit-cli-"));
afterAll(() => fs.rmSync(tmp, { recursive: true, force: true }));

interface Captured {
  code: number;
  out: string[];
  err: string[];
}

function run(argv: string[]): Captured {
  const out: string[] = [];
  const err: string[] = [];
  const code = runCli(argv, {
    stdout: (line) => out.push(line),
    stderr: (line) => err.push(line),
  });
  return { code, out, err };
}

describe("hrvplot", () => {
  it("renders a figure and exits 0", () => {
    const outPath = path.join(tmp, "fig.svg");
    const res = run(["--report", EX31, "--layout", "ex31-panel", "--out", outPath]);
    expect(res.code).toBe(0);
    expect(res.out.join("\n")).toContain("fig.svg");
    const svg = fs.readFileSync(outPath, "utf8");
    expect(svg.startsWith("<svg ")).toBe(true);
  });

  it("writes byte-identical output for repeated invocations", () => {
    const a = path.join(tmp, "a.svg");
    const b = path.join(tmp, "b.svg");
    expect(run(["--report", EX31, "--layout", "data-analysis-panel", "--out", a]).code).toBe(0);
    expect(run(["--report", EX31, "--layout", "data-analysis-panel", "--out", b]).code).toBe(0);
    expect(fs.readFileSync(a)).toEqual(fs.readFileSync(b));
  });

  it("prints usage with --help", () => {
    const res = run(["--help"]);
    expect(res.code).toBe(0);
    expect(res.out.join("\n")).toContain("usage: hrvplot");
    expect(res.out.join("\n")).toContain("data-analysis-panel");
  });

  it("exits 1 on missing required arguments", () => {
    const res = run(["--report", EX31]);
    expect(res.code).toBe(1);
    expect(res.err.join("\n")).toContain("--layout");
  });

  it("exits 1 on an unknown layout, naming the choices", () => {
    const res = run(["--report", EX31, "--layout", "nope", "--out", path.join(tmp, "x.svg")]);
    expect(res.code).toBe(1);
    expect(res.err.join("\n")).toContain("unknown layout 'nope'");
    expect(res.err.join("\n")).toContain("ex32-panel");
  });

  it("exits 1 on an unsupported format", () => {
    const res = run([
      "--report", EX31,
      "--layout", "ex31-panel",
      "--out", path.join(tmp, "x.png"),
      "--format", "png",
    ]);
    expect(res.code).toBe(1);
    expect(res.err.join("\n")).toContain("only svg");
  });

  it("exits 1 on a missing report directory", () => {
    const res = run([
      "--report", path.join(tmp, "nowhere"),
      "--layout", "ex31-panel",
      "--out", path.join(tmp, "x.svg"),
    ]);
    expect(res.code).toBe(1);
    expect(res.err.join("\n")).toContain("report not found");
  });

  it("exits 2 on a schema-version mismatch", () => {
    const dir = path.join(tmp, "wrong-version");
    fs.mkdirSync(dir, { recursive: true });
    const doc = JSON.parse(fs.readFileSync(path.join(EX31, "report.json"), "utf8"));
    doc.meta.schema_version = 99;
    fs.writeFileSync(path.join(dir, "report.json"), JSON.stringify(doc));
    const res = run(["--report", dir, "--layout", "ex31-panel", "--out", path.join(tmp, "x.svg")]);
    expect(res.code).toBe(2);
    expect(res.err.join("\n")).toContain("schema_version 99");
  });

  it("exits 2 when a layout's series is absent, naming the series", () => {
    const dir = path.join(tmp, "no-min-hill");
    fs.mkdirSync(dir, { recursive: true });
    const doc = JSON.parse(fs.readFileSync(path.join(EX31, "report.json"), "utf8"));
    delete doc.series.min_hill;
    fs.writeFileSync(path.join(dir, "report.json"), JSON.stringify(doc));
    const res = run(["--report", dir, "--layout", "ex31-panel", "--out", path.join(tmp, "x.svg")]);
    expect(res.code).toBe(2);
    expect(res.err.join("\n")).toContain("missing series 'min_hill'");
  });

  it("never mutates the report directory", () => {
    const before = fs.readFileSync(path.join(EX31, "report.json"));
    run(["--report", EX31, "--layout", "ex32-panel", "--out", path.join(tmp, "m.svg")]);
    expect(fs.readFileSync(path.join(EX31, "report.json"))).toEqual(before);
  });
});
