/**
 * Contract tests against the real backend serving the bundled fixture
 * projects. Each suite gets its own temp project copy, so mutations
 * never leak between suites.
 */

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { join } from "node:path";

import { ApiClient, type FetchLike } from "../src/api.js";
import { WorkbenchController } from "../src/controller.js";
import { groupIsUntagged } from "../src/model.js";
import { FIXTURES, startService, type FixtureService } from "./service.js";

interface RequestLogEntry {
  method: string;
  url: string;
  body: unknown;
}

/** Wrap fetch so tests can count and inspect what went over the wire. */
function loggingFetch(log: RequestLogEntry[]): FetchLike {
  return (url, init) => {
    log.push({
      method: init?.method ?? "GET",
      url,
      body:
        typeof init?.body === "string" ? JSON.parse(init.body) : undefined,
    });
    return fetch(url, init);
  };
}

describe("arrest fixture project", () => {
  let service: FixtureService;

  beforeAll(async () => {
    service = await startService(join(FIXTURES, "table1"));
  });
  afterAll(async () => {
    await service.stop();
  });

  it("shows one 3-sentence group for the arrest lexical unit", async () => {
    const controller = new WorkbenchController(
      new ApiClient(service.baseUrl),
      "annotator",
    );
    await controller.load("by");
    expect(controller.status).toBe("ready");
    expect(controller.groups).toHaveLength(1);
    const group = controller.groups[0]!;
    expect(group.frame).toBe("Arrest");
    expect(group.frameElement).toBe("Authorities");
    expect(group.lexicalUnit).toBe("arrest.v");
    expect(group.members).toHaveLength(3);
    expect(groupIsUntagged(group)).toBe(true);
    for (const member of group.members) {
      const [lo, hi] = member.prepSpan;
      expect(member.text.slice(lo, hi).toLowerCase()).toBe("by");
      expect(member.feSpan).not.toBeNull();
    }
  });

  it("mirrors the service's group payload one to one", async () => {
    const client = new ApiClient(service.baseUrl);
    const controller = new WorkbenchController(client, "annotator");
    await controller.load("by");
    const raw = await client.groupedInstances("by");
    expect(controller.version).toBe(raw.version);
    expect(controller.groups.map((g) => [g.frame, g.frameElement, g.lexicalUnit]))
      .toEqual(raw.groups.map((g) => [g.frame, g.frame_element, g.lexical_unit]));
    expect(controller.groups.map((g) => g.members.map((m) => m.instanceId)))
      .toEqual(raw.groups.map((g) => g.members.map((m) => m.instance_id)));
    expect(controller.groups.map((g) => g.members.map((m) => m.tags)))
      .toEqual(raw.groups.map((g) => g.members.map((m) => m.tags)));
  });

  it("tags a 3-member group with exactly one bulk request", async () => {
    const log: RequestLogEntry[] = [];
    const client = new ApiClient(service.baseUrl, loggingFetch(log));
    const controller = new WorkbenchController(client, "kb-annotator");
    await controller.load("by");

    // keyboard path: digit toggles the first palette row
    expect(controller.handleKey("1")).toBe(true);
    const chosen = controller.palette[0]!.key;
    expect([...controller.selection]).toEqual([chosen]);

    const before = log.length;
    const outcome = await controller.submitGroup(0);
    expect(outcome).toBe("ok");

    const posts = log
      .slice(before)
      .filter((e) => e.method === "POST" && e.url.includes("/tags"));
    expect(posts).toHaveLength(1);
    const body = posts[0]!.body as { ids: string[]; sense_keys: string[] };
    expect(body.ids).toHaveLength(3);
    expect(body.sense_keys).toEqual([chosen]);

    // state came back from the service, not from local patching
    const group = controller.groups[0]!;
    expect(groupIsUntagged(group)).toBe(false);
    for (const member of group.members) {
      expect(member.tags).toEqual([chosen]);
      expect(member.tagger).toBe("kb-annotator");
    }
    expect(controller.selection.size).toBe(0);

    const fresh = await new ApiClient(service.baseUrl).progress("by");
    expect(controller.progress).toEqual(fresh);
  });

  it("blocks an empty-selection submit before any request is made", async () => {
    const log: RequestLogEntry[] = [];
    const client = new ApiClient(service.baseUrl, loggingFetch(log));
    const controller = new WorkbenchController(client, "annotator");
    await controller.load("by");
    const before = log.length;
    expect(await controller.submitGroup(0)).toBe("blocked");
    expect(log.slice(before)).toHaveLength(0);
  });
});

describe("through fixture project", () => {
  let service: FixtureService;

  beforeAll(async () => {
    service = await startService(join(FIXTURES, "through"));
  });
  afterAll(async () => {
    await service.stop();
  });

  it("surfaces a stale-version conflict instead of overwriting", async () => {
    const base = service.baseUrl;
    const alice = new WorkbenchController(new ApiClient(base), "alice");
    const bob = new WorkbenchController(new ApiClient(base), "bob");
    await alice.load("through");
    await bob.load("through");
    expect(bob.version).toBe(alice.version);

    alice.toggleSense("1 (1)");
    expect(await alice.submitGroup(0)).toBe("ok");

    // bob still holds the old version; his write must not land
    bob.toggleSense("6 (2)");
    const bobTargets = bob.groups[1]!.members.map((m) => m.instanceId);
    expect(await bob.submitGroup(1)).toBe("stale");
    expect(bob.status).toBe("stale");
    expect(bob.pending).toEqual({
      groupIndex: 1,
      senseKeys: ["6 (2)"],
      note: null,
    });
    expect(bob.version).toBe(alice.version);

    const onDisk = await new ApiClient(base).tags("through");
    const byId = new Map(onDisk.tags.map((t) => [t.instance_id, t]));
    for (const id of bobTargets) {
      expect(byId.get(id)?.tagger).not.toBe("bob");
    }
    for (const member of alice.groups[0]!.members) {
      expect(byId.get(member.instanceId)?.tagger).toBe("alice");
    }

    // explicit re-apply against the refreshed version succeeds
    expect(await bob.reapply()).toBe("ok");
    const after = await new ApiClient(base).tags("through");
    const afterById = new Map(after.tags.map((t) => [t.instance_id, t]));
    for (const id of bobTargets) {
      expect(afterById.get(id)?.sense_keys).toEqual(["6 (2)"]);
      expect(afterById.get(id)?.tagger).toBe("bob");
    }
    // alice's earlier write is untouched
    for (const member of alice.groups[0]!.members) {
      expect(afterById.get(member.instanceId)?.tagger).toBe("alice");
    }
  });

  it("appends a created subsense to the palette and tags with it", async () => {
    const client = new ApiClient(service.baseUrl);
    const controller = new WorkbenchController(client, "annotator");
    await controller.load("through");
    const sizeBefore = controller.palette.length;
    expect(controller.canAddSubsenseTo("(1)")).toBe(true);

    const key = await controller.createSubsense("(1)", {
      relation_name: "ProbeSense",
    });
    expect(key).toBe("14 (1e)");
    expect(controller.palette).toHaveLength(sizeBefore + 1);
    const added = controller.palette[controller.palette.length - 1]!;
    expect(added.key).toBe("14 (1e)");
    expect(added.odeKey).toBe("(1e)");
    expect(added.isCore).toBe(false);
    expect(added.relationName).toBe("ProbeSense");

    // immediately taggable, no reload in between
    controller.clearSelection();
    controller.toggleSense("14 (1e)");
    expect(await controller.submitGroup(2)).toBe("ok");
    const tagged = await client.tags("through");
    const ids = controller.groups[2]!.members.map((m) => m.instanceId);
    for (const row of tagged.tags.filter((t) => ids.includes(t.instance_id))) {
      expect(row.sense_keys).toEqual(["14 (1e)"]);
    }
    const fresh = await client.progress("through");
    expect(controller.progress).toEqual(fresh);
  });

  it("shows server-side subsense validation errors verbatim", async () => {
    const controller = new WorkbenchController(
      new ApiClient(service.baseUrl),
      "annotator",
    );
    await controller.load("through");
    await expect(
      controller.createSubsense("(2)", { ordinal: 99 }),
    ).rejects.toThrow(/ordinal/);
    expect(controller.lastError).toMatch(/ordinal/);
  });

  it("refuses a subsense under a non-core parent without calling out", async () => {
    const log: RequestLogEntry[] = [];
    const client = new ApiClient(service.baseUrl, loggingFetch(log));
    const controller = new WorkbenchController(client, "annotator");
    await controller.load("through");
    expect(controller.canAddSubsenseTo("2 (1a)")).toBe(false);
    const before = log.length;
    await expect(controller.createSubsense("2 (1a)")).rejects.toThrow(
      /not a core sense/,
    );
    expect(log.slice(before)).toHaveLength(0);
  });
});

describe("empty project", () => {
  let service: FixtureService;

  beforeAll(async () => {
    service = await startService(null);
  });
  afterAll(async () => {
    await service.stop();
  });

  it("lands on the empty state instead of an error", async () => {
    const controller = new WorkbenchController(
      new ApiClient(service.baseUrl),
      "annotator",
    );
    await controller.load("through");
    expect(controller.status).toBe("ready");
    expect(controller.groups).toHaveLength(0);
    expect(controller.emptyState).toBe(true);
  });
});
