import * as fs from "node:fs";
import * as path from "node:path";
import { describe, expect, it } from "vitest";
import { FIXTURES, manifests, runCli, tmpdir, writeJobs } from "./util.js";

function allFigureJobs(outDir: string): object[] {
  return [
    { figure: "fig2", inputs: manifests("fig2"), output: path.join(outDir, "fig2.svg") },
    { figure: "fig3", inputs: manifests("fig3"), output: path.join(outDir, "fig3.svg") },
    { figure: "fig4", inputs: manifests("fig4"), output: path.join(outDir, "fig4.svg") },
    { figure: "fig5", inputs: manifests("fig5"), output: path.join(outDir, "fig5.svg") },
    { figure: "table1", inputs: [path.join(FIXTURES, "table1.json")],
      output: path.join(outDir, "table1.svg") },
  ];
}

const PANEL_COUNTS: Record<string, number> = {
  fig2: 2, fig3: 4, fig4: 2, fig5: 2, table1: 1,
};

describe("cli", () => {
  it("renders the whole demonstration set", () => {
    const dir = tmpdir();
    const out = path.join(dir, "figures");
    const jobsFile = writeJobs(dir, allFigureJobs(out));
    const r = runCli(jobsFile);
    expect(r.stderr).toBe("");
    expect(r.status).toBe(0);
    expect(r.stdout.trim().split("\n").length).toBe(5);
    for (const [fig, panels] of Object.entries(PANEL_COUNTS)) {
      const file = path.join(out, `${fig}.svg`);
      expect(fs.existsSync(file)).toBe(true);
      const svg = fs.readFileSync(file, "utf8");
      expect(svg.startsWith("<svg ")).toBe(true);
      expect(svg.split('class="panel"').length - 1).toBe(panels);
    }
  });

  it("is deterministic across invocations", () => {
    const dir = tmpdir();
    const out = path.join(dir, "figures");
    const jobsFile = writeJobs(dir, allFigureJobs(out));
    expect(runCli(jobsFile).status).toBe(0);
    const first = fs.readFileSync(path.join(out, "fig4.svg"));
    expect(runCli(jobsFile).status).toBe(0);
    const second = fs.readFileSync(path.join(out, "fig4.svg"));
    expect(second.equals(first)).toBe(true);
  });

  it("suppresses timestamps", () => {
    const dir = tmpdir();
    const out = path.join(dir, "figures");
    const jobsFile = writeJobs(dir, allFigureJobs(out));
    expect(runCli(jobsFile).status).toBe(0);
    const year = String(new Date().getFullYear());
    for (const fig of Object.keys(PANEL_COUNTS)) {
      const svg = fs.readFileSync(path.join(out, `${fig}.svg`), "utf8");
      expect(svg).not.toContain(year);
    }
  });

  it("rejects an empty job list and writes nothing", () => {
    const dir = tmpdir();
    const jobsFile = writeJobs(dir, []);
    const r = runCli(jobsFile);
    expect(r.status).toBe(2);
    expect(r.stderr).toContain("no jobs");
    expect(fs.readdirSync(dir)).toEqual(["jobs.json"]);
  });

  it("rejects a job with an empty input set", () => {
    const dir = tmpdir();
    const jobsFile = writeJobs(dir, [
      { figure: "fig4", inputs: [], output: path.join(dir, "fig4.svg") },
    ]);
    const r = runCli(jobsFile);
    expect(r.status).toBe(2);
    expect(r.stderr).toContain("empty input set");
    expect(fs.existsSync(path.join(dir, "fig4.svg"))).toBe(false);
  });

  it("rejects a missing input file and writes nothing", () => {
    const dir = tmpdir();
    const jobsFile = writeJobs(dir, [
      { figure: "fig4", inputs: [path.join(dir, "nope.manifest.json")],
        output: path.join(dir, "fig4.svg") },
    ]);
    const r = runCli(jobsFile);
    expect(r.status).toBe(2);
    expect(r.stderr).toContain("not found");
    expect(fs.existsSync(path.join(dir, "fig4.svg"))).toBe(false);
  });

  it("rejects schema-invalid inputs and writes nothing", () => {
    const dir = tmpdir();
    const src = path.join(FIXTURES, "fig4");
    for (const base of ["manifest.json", "peaks.json"]) {
      fs.copyFileSync(path.join(src, `fig4a_strong.${base}`),
                      path.join(dir, `fig4a_strong.${base}`));
    }
    fs.writeFileSync(path.join(dir, "fig4a_strong.spectrum.csv"), "totally,wrong\n1,2\n");
    const jobsFile = writeJobs(dir, [
      { figure: "fig4",
        inputs: [path.join(dir, "fig4a_strong.manifest.json")],
        output: path.join(dir, "fig4.svg") },
    ]);
    const r = runCli(jobsFile);
    expect(r.status).toBe(2);
    expect(r.stderr).toContain("does not match");
    expect(fs.existsSync(path.join(dir, "fig4.svg"))).toBe(false);
  });

  it("rejects a malformed manifest", () => {
    const dir = tmpdir();
    const file = path.join(dir, "jobs.json");
    fs.writeFileSync(file, "{ not json");
    const r = runCli(file);
    expect(r.status).toBe(2);
    expect(r.stderr).toContain("not valid JSON");
  });

  it("wants exactly one argument", () => {
    expect(runCli().status).toBe(2);
    expect(runCli("a.json", "b.json").status).toBe(2);
    const help = runCli("--help");
    expect(help.status).toBe(0);
    expect(help.stdout).toContain("usage");
  });
});

// Renders from a full-resolution preset tree (the layout written by
// scripts/run_all_presets.py) when one is provided via RABISPLIT_RUNS.
const fullRuns = process.env.RABISPLIT_RUNS;

describe.runIf(fullRuns)("full-resolution preset outputs", () => {
  function presetManifests(...groups: string[]): string[] {
    return groups.flatMap((g) => {
      const dir = path.join(fullRuns!, g);
      return fs.readdirSync(dir)
        .filter((f) => f.endsWith(".manifest.json"))
        .sort()
        .map((f) => path.join(dir, f));
    });
  }

  it("renders all five figures with the expected panel counts", () => {
    const dir = tmpdir();
    const out = path.join(dir, "figures");
    const jobsFile = writeJobs(dir, [
      { figure: "fig2", inputs: presetManifests("fig2"),
        output: path.join(out, "fig2.svg") },
      { figure: "fig3", inputs: presetManifests("fig3a", "fig3b", "fig3c", "fig3d"),
        output: path.join(out, "fig3.svg") },
      { figure: "fig4", inputs: presetManifests("fig4a", "fig4b"),
        output: path.join(out, "fig4.svg") },
      { figure: "fig5", inputs: presetManifests("fig5a", "fig5b"),
        output: path.join(out, "fig5.svg") },
      { figure: "table1", inputs: [path.join(fullRuns!, "table1.json")],
        output: path.join(out, "table1.svg") },
    ]);
    const r = runCli(jobsFile);
    expect(r.stderr).toBe("");
    expect(r.status).toBe(0);
    for (const [fig, panels] of Object.entries(PANEL_COUNTS)) {
      const svg = fs.readFileSync(path.join(out, `${fig}.svg`), "utf8");
      expect(svg.split('class="panel"').length - 1).toBe(panels);
    }
  });
});
