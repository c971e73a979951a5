import { mkdirSync, mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { main } from "../src/run_equivalence";

const PYTHON = process.env.CPSLINT_PYTHON ?? "python3";

const MINI_SPEC = [
  "import csv from 'ref.csv' skip empty;",
  "export csv",
  "  'Timestamp' is 'Timestamp' as int,",
  "  'Voltage' is 'Voltage' as real in [0.0, 15.0] impute linear interpolation,",
  "  'UART' is 'UART' as str",
  "  to 'mini_clean.csv';",
  "",
].join("\n");

const CUT_SPEC = [
  "import csv from 'ref.csv';",
  "export csv 'Timestamp' is 'Timestamp' as int, 'UART' is 'UART'",
  "  to 'part#.csv' sort by 'Timestamp' cut when 'UART' is 'image loader';",
  "",
].join("\n");

describe("run_equivalence", () => {
  it("finds both pipelines equivalent on a small corpus", () => {
    const dir = mkdtempSync(join(tmpdir(), "equiv-"));
    const corpus = join(dir, "corpus");
    mkdirSync(corpus);
    writeFileSync(join(corpus, "mini.cps"), MINI_SPEC);
    writeFileSync(join(corpus, "cut.cps"), CUT_SPEC);
    const config = join(dir, "config.yaml");
    writeFileSync(config, [
      "input_dir: inputs",
      "output_dir: work",
      `python_cmd: ${JSON.stringify(PYTHON)}`,
      "pipeline: compiler",
      "",
    ].join("\n"));
    const code = main([corpus, config, "--rows", "400"]);
    expect(code).toBe(0);
  }, 300_000);

  it("rejects an empty corpus", () => {
    const dir = mkdtempSync(join(tmpdir(), "equiv-"));
    mkdirSync(join(dir, "corpus"));
    const config = join(dir, "config.yaml");
    writeFileSync(config, [
      "input_dir: inputs",
      "output_dir: work",
      `python_cmd: ${JSON.stringify(PYTHON)}`,
      "pipeline: compiler",
      "",
    ].join("\n"));
    expect(main([join(dir, "corpus"), config])).toBe(2);
  });
});
