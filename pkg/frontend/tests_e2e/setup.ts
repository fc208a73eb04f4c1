/**
 * E2E global setup: generate the seed-1 dataset and run the real service.
 */

import { ChildProcess, spawn, spawnSync } from 'node:child_process';
import { mkdtempSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import type { GlobalSetupContext } from 'vitest/node';

const PYTHON = process.env.GRAPHTRAIL_PYTHON ?? 'python3';

let server: ChildProcess | undefined;

async function waitForService(url: string, timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    try {
      const response = await fetch(`${url}/api/datasets`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) {
      throw new Error(`service at ${url} did not come up in ${timeoutMs}ms`);
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
}

export default async function setup({ provide }: GlobalSetupContext): Promise<() => void> {
  const workDir = mkdtempSync(join(tmpdir(), 'graphtrail-e2e-'));
  const dataDir = join(workDir, 'data');

  const generated = spawnSync(
    PYTHON,
    ['-m', 'graphtrail.cli', 'generate', '--seed', '1', '--scale', '1000', '--out', dataDir],
    { stdio: 'inherit' },
  );
  if (generated.status !== 0) {
    throw new Error('dataset generation failed; is the graphtrail package installed?');
  }

  const port = 8600 + Math.floor(Math.random() * 400);
  const url = `http://127.0.0.1:${port}`;
  server = spawn(
    PYTHON,
    [
      '-m', 'graphtrail.cli', 'serve',
      '--dataset', join(dataDir, 'manifest.json'),
      '--port', String(port),
      '--bookmark-dir', join(workDir, 'bookmarks'),
      '--fixed-clock', '1600000000',
    ],
    { stdio: 'inherit' },
  );
  await waitForService(url);
  provide('graphtrailUrl', url);

  return () => {
    server?.kill('SIGTERM');
  };
}

declare module 'vitest' {
  export interface ProvidedContext {
    graphtrailUrl: string;
  }
}
