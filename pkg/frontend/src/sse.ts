// Minimal SSE reader over fetch streaming; works in browsers and in node,
// unlike the EventSource global. Reconnection is handled by the caller
// (main.ts refetches the scene snapshot and resubscribes live; no history
// replay on reconnect).

export interface SseSubscription {
  close(): void;
  done: Promise<void>;
  // Resolves once the first bytes arrive; the server sends a hello comment
  // after registering the subscription, so awaiting this closes the gap
  // between "fetch started" and "events will be delivered".
  ready: Promise<void>;
}

export function subscribeEvents(
  url: string,
  onEvent: (event: unknown) => void,
  onError?: (err: unknown) => void,
): SseSubscription {
  const controller = new AbortController();
  let markReady!: () => void;
  const ready = new Promise<void>((resolve) => {
    markReady = resolve;
  });

  const done = (async () => {
    try {
      const response = await fetch(url, {
        signal: controller.signal,
        headers: { Accept: "text/event-stream" },
      });
      if (!response.ok || response.body === null) {
        throw new Error(`event stream failed: HTTP ${response.status}`);
      }
      const reader = response.body.getReader();
      const decoder = new TextDecoder();
      let buffer = "";
      for (;;) {
        const { done: finished, value } = await reader.read();
        if (finished) {
          break;
        }
        markReady();
        buffer += decoder.decode(value, { stream: true });
        let cut;
        while ((cut = buffer.indexOf("\n\n")) >= 0) {
          const chunk = buffer.slice(0, cut);
          buffer = buffer.slice(cut + 2);
          for (const line of chunk.split("\n")) {
            if (line.startsWith("data: ")) {
              onEvent(JSON.parse(line.slice(6)));
            }
            // comment lines (": keep-alive") are ignored
          }
        }
      }
    } catch (err) {
      if (!controller.signal.aborted && onError) {
        onError(err);
      }
    } finally {
      markReady(); // never leave awaiters hanging on a failed stream
    }
  })();

  return {
    close: () => controller.abort(),
    done,
    ready,
  };
}
