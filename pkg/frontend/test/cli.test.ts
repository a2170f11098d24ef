import assert from "node:assert/strict";
import { spawnSync } from "node:child_process";
import fs from "node:fs";
import os from "node:os";
import path from "node:path";
import { test } from "node:test";

const FIXTURES = path.join(__dirname, "..", "..", "test", "fixtures");
const MAIN = path.join(__dirname, "..", "src", "main.js");

function runCli(args: string[]) {
    return spawnSync(process.execPath, [MAIN, ...args], { encoding: "utf-8" });
}

function tmpFile(name: string): string {
    return path.join(fs.mkdtempSync(path.join(os.tmpdir(), "aon-plot-")), name);
}

test("renders the golden sweep to SVG and exits 0", () => {
    const out = tmpFile("fig.svg");
    const proc = runCli([
        "--kind", "mmse",
        "--in", path.join(FIXTURES, "sweep_a8.csv"),
        "--out", out,
    ]);
    assert.equal(proc.status, 0, proc.stderr);
    const svg = fs.readFileSync(out, "utf-8");
    assert.ok(svg.length > 1000);
    assert.match(svg, /^<svg /);
    assert.match(svg, /class="beta-one"/);
});

test("json-lines input renders identically to csv", () => {
    const fromCsv = tmpFile("csv.svg");
    const fromJsonl = tmpFile("jsonl.svg");
    runCli(["--kind", "dn", "--in", path.join(FIXTURES, "sweep_a8.csv"), "--out", fromCsv]);
    runCli(["--kind", "dn", "--in", path.join(FIXTURES, "sweep_a8.jsonl"), "--out", fromJsonl]);
    assert.equal(fs.readFileSync(fromCsv, "utf-8"), fs.readFileSync(fromJsonl, "utf-8"));
});

test("malformed input exits nonzero naming the missing column", () => {
    const lines = fs
        .readFileSync(path.join(FIXTURES, "sweep_a8.csv"), "utf-8")
        .trim()
        .split("\n");
    const mangled = lines
        .map((line) => {
            const cells = line.split(",");
            cells.splice(3, 1); // drop mmse_se
            return cells.join(",");
        })
        .join("\n");
    const input = tmpFile("broken.csv");
    fs.writeFileSync(input, mangled);
    const proc = runCli(["--kind", "mmse", "--in", input, "--out", tmpFile("fig.svg")]);
    assert.notEqual(proc.status, 0);
    assert.match(proc.stderr, /mmse_se/);
});

test("missing file exits nonzero", () => {
    const proc = runCli(["--kind", "mmse", "--in", "no-such.csv", "--out", tmpFile("f.svg")]);
    assert.equal(proc.status, 1);
});

test("usage errors exit 2", () => {
    assert.equal(runCli(["--kind", "mmse"]).status, 2);
    assert.equal(runCli(["--kind", "nope", "--in", "a", "--out", "b"]).status, 2);
    assert.equal(runCli(["--bogus"]).status, 2);
});

test("summary kind writes a text report", () => {
    const out = tmpFile("summary.txt");
    const proc = runCli([
        "--kind", "summary",
        "--in", path.join(FIXTURES, "sweep_a8.csv"),
        "--out", out,
    ]);
    assert.equal(proc.status, 0, proc.stderr);
    assert.match(fs.readFileSync(out, "utf-8"), /sweep summary/);
});

test("pred-entropy kind renders", () => {
    const out = tmpFile("pred.svg");
    const proc = runCli([
        "--kind", "pred-entropy",
        "--in", path.join(FIXTURES, "sweep_a8.jsonl"),
        "--out", out,
        "--no-error-bars",
    ]);
    assert.equal(proc.status, 0, proc.stderr);
    assert.doesNotMatch(fs.readFileSync(out, "utf-8"), /class="error-bar"/);
});
