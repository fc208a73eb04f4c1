import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    include: ['tests_e2e/**/*.test.ts'],
    environment: 'node',
    globalSetup: ['tests_e2e/setup.ts'],
    testTimeout: 30_000,
    hookTimeout: 60_000,
  },
});
