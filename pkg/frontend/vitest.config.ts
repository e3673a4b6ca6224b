import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    // contract tests spawn the backend; give startup some slack
    testTimeout: 30_000,
    hookTimeout: 30_000,
  },
});
